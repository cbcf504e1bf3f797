// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 groundcite contributors

#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "groundcite/error.hpp"
#include "groundcite/greedy_select.hpp"
#include "support/fixtures.hpp"

using namespace groundcite;

namespace {

// Summed in sorted order so the same set always gives the same mean.
double mean_s(const SelectionResult& r) {
    std::vector<double> v;
    for (const auto& c : r.selected) v.push_back(c.query_similarity);
    std::sort(v.begin(), v.end());
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

SelectionCandidate cand(std::string id, std::vector<double> e, double s) {
    return {std::move(id), EmbeddingVector::normalized(std::move(e)), s};
}

}  // namespace

TEST(GreedySelect, MatchesStepExhaustiveOracle) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        std::mt19937_64 rng(seed);
        const std::size_t size = 1 + seed % 7;
        const auto pool = testsupport::random_pool(rng, size, 6);
        for (std::size_t n = 1; n <= std::min<std::size_t>(5, size); ++n) {
            for (double w : {0.0, 0.25, 0.5, 0.75, 1.0}) {
                ASSERT_EQ(greedy_select(pool, n, w).ids(), testsupport::oracle_select(pool, n, w))
                    << "seed " << seed << " n " << n << " w " << w;
            }
        }
    }
}

TEST(GreedySelect, ZeroDiversityIsTopN) {
    std::mt19937_64 rng(99);
    for (int t = 0; t < 300; ++t) {
        const std::size_t size = 1 + rng() % 30;
        const auto pool = testsupport::random_pool(rng, size, 8);
        const std::size_t n = 1 + rng() % size;
        ASSERT_EQ(greedy_select(pool, n, 0.0).ids(), testsupport::oracle_top_n(pool, n));
    }
}

TEST(GreedySelect, FirstPickIsMostSimilarForAnyWeight) {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 100; ++t) {
        const auto pool = testsupport::random_pool(rng, 12, 8);
        const auto top = testsupport::oracle_top_n(pool, 1).front();
        for (double w : {0.0, 0.3, 0.7, 1.0}) EXPECT_EQ(greedy_select(pool, 4, w).ids().front(), top);
    }
}

TEST(GreedySelect, ZeroDiversityDominatesMeanSimilarity) {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 200; ++t) {
        const auto pool = testsupport::random_pool(rng, 15, 8);
        const double base = mean_s(greedy_select(pool, 5, 0.0));
        for (double w : {0.3, 0.7, 1.0}) ASSERT_GE(base, mean_s(greedy_select(pool, 5, w)));
    }
}

TEST(GreedySelect, FullDiversityAvoidsNearDuplicates) {
    // b is a near copy of a; c is orthogonal but less similar to the query.
    std::vector<SelectionCandidate> pool = {cand("a", {1, 0, 0}, 0.9), cand("b", {1, 0.01, 0}, 0.89),
                                            cand("c", {0, 1, 0}, 0.5)};
    EXPECT_EQ(greedy_select(pool, 2, 0.0).ids(), (std::vector<std::string>{"a", "b"}));
    EXPECT_EQ(greedy_select(pool, 2, 1.0).ids(), (std::vector<std::string>{"a", "c"}));
}

TEST(GreedySelect, TiesBreakByAscendingId) {
    std::vector<SelectionCandidate> pool = {cand("z", {1, 0}, 0.5), cand("m", {1, 0}, 0.5), cand("a", {1, 0}, 0.5)};
    EXPECT_EQ(greedy_select(pool, 3, 0.0).ids(), (std::vector<std::string>{"a", "m", "z"}));
    EXPECT_EQ(greedy_select(pool, 3, 1.0).ids(), (std::vector<std::string>{"a", "m", "z"}));
}

TEST(GreedySelect, SelectsDistinctCandidates) {
    std::mt19937_64 rng(8);
    const auto pool = testsupport::random_pool(rng, 20, 4);
    auto ids = greedy_select(pool, 20, 0.6).ids();
    std::sort(ids.begin(), ids.end());
    EXPECT_EQ(std::unique(ids.begin(), ids.end()), ids.end());
}

TEST(GreedySelect, ValidatesArguments) {
    std::vector<SelectionCandidate> pool = {cand("a", {1, 0}, 0.1), cand("b", {0, 1}, 0.2)};
    EXPECT_THROW(greedy_select({}, 1, 0.0), Error);
    EXPECT_THROW(greedy_select(pool, 0, 0.0), Error);
    EXPECT_THROW(greedy_select(pool, 3, 0.0), Error);
    try {
        greedy_select(pool, 1, 1.5);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.field(), "diversity");
    }
    EXPECT_THROW(greedy_select(pool, 1, std::nan("")), Error);
    auto dup = pool;
    dup.push_back(pool[0]);
    EXPECT_THROW(greedy_select(dup, 1, 0.0), Error);
    auto mixed = pool;
    mixed.push_back(cand("c", {1, 0, 0}, 0.3));
    EXPECT_THROW(greedy_select(mixed, 1, 0.0), Error);
}

TEST(GreedySelect, CustomSimilarityFunctor) {
    std::vector<SelectionCandidate> pool = {cand("a", {1, 0}, 0.9), cand("b", {0, 1}, 0.8), cand("c", {1, 1}, 0.7)};
    // A similarity that calls everything identical turns w=1 into pure id order after the first pick.
    auto same = [](const EmbeddingVector&, const EmbeddingVector&) { return 1.0; };
    EXPECT_EQ(greedy_select(pool, 3, 1.0, same).ids(), (std::vector<std::string>{"a", "b", "c"}));
}
