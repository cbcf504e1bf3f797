// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 groundcite contributors

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace groundcite {

/// Unit-norm, finite embedding. Construction always normalizes, so every
/// instance satisfies |v| = 1 within 1e-6 and holds no NaN/inf components.
class EmbeddingVector {
public:
    EmbeddingVector() = default;

    /// Normalizes `values`. Throws a validation error for empty, zero-norm
    /// or non-finite input.
    static EmbeddingVector normalized(std::vector<double> values);

    /// Adopts values that are already unit-norm (|1 - norm| <= 1e-6) without
    /// rescaling, so persisted vectors round-trip bit-exactly.
    static EmbeddingVector from_unit(std::vector<double> values);

    std::size_t dim() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }

    friend bool operator==(const EmbeddingVector&, const EmbeddingVector&) = default;

private:
    explicit EmbeddingVector(std::vector<double> v) : values_(std::move(v)) {}
    std::vector<double> values_;
};

/// Plain sequential dot product. Sizes must match (unchecked).
inline double dot(std::span<const double> a, std::span<const double> b) noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

/// Cosine similarity of unit vectors, i.e. their dot product.
/// Throws a validation error on dimension mismatch.
double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b);

}  // namespace groundcite
