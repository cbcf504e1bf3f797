// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 groundcite contributors

#include "groundcite/error.hpp"

namespace groundcite {

const char* error_code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::kValidation: return "validation_error";
        case ErrorCode::kNotFound: return "not_found";
        case ErrorCode::kConflict: return "conflict";
        case ErrorCode::kOverloaded: return "overloaded";
        case ErrorCode::kPayloadTooLarge: return "payload_too_large";
        case ErrorCode::kUnauthorized: return "unauthorized";
        case ErrorCode::kIo: return "io_error";
        case ErrorCode::kEmptyCorpus: return "empty_corpus";
        case ErrorCode::kEmbeddingUnavailable: return "embedding_unavailable";
        case ErrorCode::kLlmUnavailable: return "llm_unavailable";
        case ErrorCode::kNoUsableSources: return "no_usable_sources";
        case ErrorCode::kSynthesis: return "synthesis_error";
        case ErrorCode::kEmptyReport: return "empty_report";
        case ErrorCode::kTransport: return "transport_error";
        case ErrorCode::kParse: return "parse_error";
    }
    return "error";
}

}  // namespace groundcite
