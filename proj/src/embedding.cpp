// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 groundcite contributors

#include "groundcite/embedding.hpp"

#include <cmath>
#include <string>

#include "groundcite/error.hpp"

namespace groundcite {

EmbeddingVector EmbeddingVector::normalized(std::vector<double> values) {
    if (values.empty()) throw validation_error("embedding", "embedding has zero dimension");
    double sq = 0.0;
    for (double v : values) {
        if (!std::isfinite(v)) throw validation_error("embedding", "embedding has a non-finite component");
        sq += v * v;
    }
    const double norm = std::sqrt(sq);
    if (!(norm > 0.0) || !std::isfinite(norm)) throw validation_error("embedding", "embedding has zero norm");
    for (double& v : values) v /= norm;
    return EmbeddingVector(std::move(values));
}

EmbeddingVector EmbeddingVector::from_unit(std::vector<double> values) {
    if (values.empty()) throw validation_error("embedding", "embedding has zero dimension");
    double sq = 0.0;
    for (double v : values) {
        if (!std::isfinite(v)) throw validation_error("embedding", "embedding has a non-finite component");
        sq += v * v;
    }
    if (std::abs(std::sqrt(sq) - 1.0) > 1e-6) throw validation_error("embedding", "embedding is not unit-norm");
    return EmbeddingVector(std::move(values));
}

double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.dim() != b.dim()) {
        throw validation_error("embedding", "dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                                                std::to_string(b.dim()));
    }
    return dot(a.values(), b.values());
}

}  // namespace groundcite
