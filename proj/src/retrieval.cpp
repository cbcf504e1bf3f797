// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 groundcite contributors

#include "groundcite/retrieval.hpp"

#include <cmath>

namespace groundcite {

void validate_params(const GenerationParams& p) {
    if (p.breadth < 1 || p.breadth > kMaxBreadth) {
        throw validation_error("breadth", "breadth must be an integer in [1, " + std::to_string(kMaxBreadth) + "]");
    }
    if (p.depth < 1 || p.depth > kMaxDepth) {
        throw validation_error("depth", "depth must be an integer in [1, " + std::to_string(kMaxDepth) + "]");
    }
    if (!std::isfinite(p.diversity) || p.diversity < 0.0 || p.diversity > 1.0) {
        throw validation_error("diversity", "diversity must lie in [0, 1]");
    }
}

std::vector<SelectionCandidate> candidates_from_hits(const std::vector<SearchHit>& hits, const CorpusStore& store) {
    std::vector<SelectionCandidate> pool;
    pool.reserve(hits.size());
    for (const auto& h : hits) {
        auto rec = store.get(h.arxiv_id);
        if (!rec) continue;
        pool.push_back({h.arxiv_id, std::move(rec->embedding), h.similarity});
    }
    return pool;
}

SelectionResult build_longlist(const EmbeddingVector& query, const GenerationParams& params, const CorpusStore& store,
                               const RetrievalConfig& cfg) {
    validate_params(params);
    if (store.count() == 0) throw Error(ErrorCode::kEmptyCorpus, "the corpus store is empty");

    const std::size_t breadth = static_cast<std::size_t>(params.breadth);
    const std::size_t pool_size = std::max<std::size_t>(1, cfg.pool_factor) * breadth;
    auto hits = store.search(query, pool_size);

    std::vector<std::string> excluded;
    if (cfg.exclude_query_duplicate) {
        std::erase_if(hits, [&](const SearchHit& h) {
            if (h.similarity < cfg.duplicate_threshold) return false;
            excluded.push_back(h.arxiv_id);
            return true;
        });
    }

    auto pool = candidates_from_hits(hits, store);
    if (pool.empty()) {
        SelectionResult empty;
        empty.underfilled = true;
        empty.excluded = std::move(excluded);
        return empty;
    }
    const std::size_t n = std::min(breadth, pool.size());
    SelectionResult result = greedy_select(pool, n, params.diversity);
    result.underfilled = pool.size() < breadth;
    result.excluded = std::move(excluded);
    return result;
}

}  // namespace groundcite
