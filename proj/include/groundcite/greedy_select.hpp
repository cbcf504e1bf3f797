// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 groundcite contributors

#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <string>
#include <unordered_set>
#include <vector>

#include "groundcite/embedding.hpp"
#include "groundcite/error.hpp"

namespace groundcite {

struct SelectionCandidate {
    std::string id;
    EmbeddingVector embedding;
    double query_similarity = 0.0;
};

struct SelectionResult {
    std::vector<SelectionCandidate> selected;  // in selection order
    /// Set when the pool held fewer candidates than the requested breadth.
    bool underfilled = false;
    /// Candidates dropped before selection (e.g. the query paper itself).
    std::vector<std::string> excluded;

    std::vector<std::string> ids() const {
        std::vector<std::string> out;
        out.reserve(selected.size());
        for (const auto& c : selected) out.push_back(c.id);
        return out;
    }
};

struct CosineSim {
    double operator()(const EmbeddingVector& a, const EmbeddingVector& b) const { return dot(a.values(), b.values()); }
};

/// Diversity-weighted greedy selection.
///
/// The first pick is the candidate with the highest query similarity. Every
/// later pick maximizes
///
///     (1 - w) * s_i + w * (1 - min_{j in S} sim(e_i, e_j))
///
/// over the unchosen candidates, where S is the set chosen so far. Every
/// argmax breaks ties by ascending id, so the output does not depend on pool
/// order. Returns exactly n candidates.
template <typename Sim = CosineSim>
SelectionResult greedy_select(const std::vector<SelectionCandidate>& pool, std::size_t n, double w, Sim sim = {}) {
    if (pool.empty()) throw validation_error("pool", "selection pool is empty");
    if (n == 0) throw validation_error("n", "selection size must be at least 1");
    if (n > pool.size()) {
        throw validation_error("n", "selection size " + std::to_string(n) + " exceeds pool size " +
                                        std::to_string(pool.size()));
    }
    if (!(w >= 0.0 && w <= 1.0)) throw validation_error("diversity", "diversity must lie in [0, 1]");
    {
        std::unordered_set<std::string> seen;
        const std::size_t dim = pool.front().embedding.dim();
        for (const auto& c : pool) {
            if (!seen.insert(c.id).second) throw validation_error("pool", "duplicate candidate id " + c.id);
            if (c.embedding.dim() != dim) throw validation_error("pool", "candidate embeddings differ in dimension");
        }
    }

    auto better = [&pool](std::size_t a, double score_a, std::size_t b, double score_b) {
        if (score_a != score_b) return score_a > score_b;
        return pool[a].id < pool[b].id;
    };

    std::vector<bool> chosen(pool.size(), false);
    // Running min similarity of each candidate to the chosen set.
    std::vector<double> min_sim(pool.size(), std::numeric_limits<double>::infinity());

    SelectionResult result;
    result.selected.reserve(n);

    std::size_t pick = 0;
    for (std::size_t i = 1; i < pool.size(); ++i) {
        if (better(i, pool[i].query_similarity, pick, pool[pick].query_similarity)) pick = i;
    }

    while (true) {
        chosen[pick] = true;
        result.selected.push_back(pool[pick]);
        if (result.selected.size() == n) break;

        const auto& last = pool[pick].embedding;
        std::size_t best = pool.size();
        double best_score = 0.0;
        for (std::size_t i = 0; i < pool.size(); ++i) {
            if (chosen[i]) continue;
            min_sim[i] = std::min(min_sim[i], sim(pool[i].embedding, last));
            const double score = (1.0 - w) * pool[i].query_similarity + w * (1.0 - min_sim[i]);
            if (best == pool.size() || better(i, score, best, best_score)) {
                best = i;
                best_score = score;
            }
        }
        pick = best;
    }
    return result;
}

}  // namespace groundcite
