// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 groundcite contributors

#include <cmath>

#include <gtest/gtest.h>

#include "groundcite/embedding.hpp"
#include "groundcite/error.hpp"

using namespace groundcite;

TEST(EmbeddingVector, NormalizesToUnitLength) {
    const auto v = EmbeddingVector::normalized({3.0, 4.0});
    EXPECT_DOUBLE_EQ(v[0], 0.6);
    EXPECT_DOUBLE_EQ(v[1], 0.8);
    EXPECT_NEAR(dot(v.values(), v.values()), 1.0, 1e-12);
}

TEST(EmbeddingVector, RejectsDegenerateInput) {
    EXPECT_THROW(EmbeddingVector::normalized({}), Error);
    EXPECT_THROW(EmbeddingVector::normalized({0.0, 0.0}), Error);
    EXPECT_THROW(EmbeddingVector::normalized({1.0, NAN}), Error);
    EXPECT_THROW(EmbeddingVector::normalized({INFINITY, 1.0}), Error);
}

TEST(EmbeddingVector, FromUnitKeepsBitsAndChecksNorm) {
    const auto a = EmbeddingVector::normalized({1.0, 2.0, 3.0});
    const auto b = EmbeddingVector::from_unit(std::vector<double>(a.values().begin(), a.values().end()));
    EXPECT_EQ(a, b);
    EXPECT_THROW(EmbeddingVector::from_unit({1.0, 1.0}), Error);
}

TEST(EmbeddingVector, CosineOfUnitVectorsIsDot) {
    const auto a = EmbeddingVector::normalized({1.0, 0.0});
    const auto b = EmbeddingVector::normalized({1.0, 1.0});
    EXPECT_NEAR(cosine_similarity(a, b), std::sqrt(0.5), 1e-12);
    EXPECT_NEAR(cosine_similarity(a, a), 1.0, 1e-12);
    EXPECT_THROW(cosine_similarity(a, EmbeddingVector::normalized({1.0, 2.0, 3.0})), Error);
}
