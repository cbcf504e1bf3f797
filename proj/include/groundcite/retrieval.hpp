// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 groundcite contributors

#pragma once

#include <cstddef>

#include "groundcite/corpus_store.hpp"
#include "groundcite/greedy_select.hpp"

namespace groundcite {

/// The three user-facing generation knobs.
struct GenerationParams {
    int breadth = 10;        // longlist size; also scales the initial query
    int depth = 2;           // pages kept per paper
    double diversity = 0.0;  // w in the selection objective

    friend bool operator==(const GenerationParams&, const GenerationParams&) = default;
};

inline constexpr int kMaxBreadth = 50;
inline constexpr int kMaxDepth = 20;

/// Throws a validation error naming the offending field.
void validate_params(const GenerationParams& params);

struct RetrievalConfig {
    /// Initial similarity query fetches pool_factor * breadth candidates.
    std::size_t pool_factor = 5;
    /// Drop stored records that are (near) copies of the query text.
    bool exclude_query_duplicate = true;
    double duplicate_threshold = 0.999;
};

/// Queries the store and runs greedy selection over the hits.
/// Throws Error(kEmptyCorpus) when the store is empty.
SelectionResult build_longlist(const EmbeddingVector& query, const GenerationParams& params, const CorpusStore& store,
                               const RetrievalConfig& cfg = {});

/// Converts search hits to selection candidates with embeddings fetched from
/// the store; hits whose record vanished in between are skipped.
std::vector<SelectionCandidate> candidates_from_hits(const std::vector<SearchHit>& hits, const CorpusStore& store);

}  // namespace groundcite
