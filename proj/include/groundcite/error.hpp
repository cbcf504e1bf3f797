// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 groundcite contributors

#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace groundcite {

enum class ErrorCode {
    kValidation,
    kNotFound,
    kConflict,
    kOverloaded,
    kPayloadTooLarge,
    kUnauthorized,
    kIo,
    kEmptyCorpus,
    kEmbeddingUnavailable,
    kLlmUnavailable,
    kNoUsableSources,
    kSynthesis,
    kEmptyReport,
    kTransport,
    kParse,
};

/// Stable lowercase name used in the HTTP error envelope.
const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, std::string field = {})
        : std::runtime_error(message), code_(code), field_(std::move(field)) {}

    ErrorCode code() const noexcept { return code_; }
    /// Offending input field for validation errors, empty otherwise.
    const std::string& field() const noexcept { return field_; }

private:
    ErrorCode code_;
    std::string field_;
};

inline Error validation_error(const std::string& field, const std::string& message) {
    return Error(ErrorCode::kValidation, message, field);
}

/// Raised when embedding requests fail after all retries. Carries the input
/// positions that could not be embedded.
class EmbeddingUnavailable : public Error {
public:
    EmbeddingUnavailable(const std::string& message, std::vector<std::size_t> failed)
        : Error(ErrorCode::kEmbeddingUnavailable, message), failed_(std::move(failed)) {}

    const std::vector<std::size_t>& failed_indices() const noexcept { return failed_; }

private:
    std::vector<std::size_t> failed_;
};

}  // namespace groundcite
