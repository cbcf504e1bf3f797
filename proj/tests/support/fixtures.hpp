// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 groundcite contributors

#pragma once

#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "groundcite/arxiv.hpp"
#include "groundcite/corpus_store.hpp"
#include "groundcite/greedy_select.hpp"

namespace testsupport {

using groundcite::EmbeddingVector;
using groundcite::PaperMetadata;
using groundcite::SearchHit;
using groundcite::SelectionCandidate;

EmbeddingVector random_unit(std::mt19937_64& rng, std::size_t dim);

/// `size` candidates "c0", "c1", ... whose query similarity is their dot
/// product with a random unit query.
std::vector<SelectionCandidate> random_pool(std::mt19937_64& rng, std::size_t size, std::size_t dim);

/// Evaluates the selection objective from scratch for every unchosen
/// candidate at every step: first pick argmax s_i, then
/// argmax (1-w) s_i + w (1 - min_{j in S} <e_i, e_j>); ties to the smaller id.
std::vector<std::string> oracle_select(const std::vector<SelectionCandidate>& pool, std::size_t n, double w);

/// The n largest s_i, ties to the smaller id.
std::vector<std::string> oracle_top_n(const std::vector<SelectionCandidate>& pool, std::size_t n);

/// Scans every record: similarity descending, ties by ascending id.
std::vector<SearchHit> brute_force_search(const std::vector<groundcite::PaperRecord>& records,
                                          const EmbeddingVector& query, std::size_t k);

/// Store contents as "CGST" bytes (records in id order).
std::string store_bytes(const groundcite::CorpusStore& store);

std::string to_dump(const std::vector<PaperMetadata>& records);

/// A pre-loaded corpus and a later metadata dump with known ground truth.
struct SyncFixture {
    std::vector<PaperMetadata> base;      // what the store holds initially
    std::vector<PaperMetadata> snapshot;  // unchanged + mutated + fresh, shuffled
    std::vector<PaperMetadata> full;      // snapshot plus the base records it omits
    std::set<std::string> unchanged, mutated, fresh, omitted;
};

/// base_n records; the snapshot leaves `omitted` of them out, edits the
/// abstract of `mutated` others and adds `fresh` new ids.
SyncFixture make_sync_fixture(std::size_t base_n, std::size_t mutated, std::size_t fresh, std::size_t omitted,
                              std::uint64_t seed);

/// A fresh empty directory under the system temp dir.
std::filesystem::path fresh_dir(const std::string& name);

/// Root of the source tree (for bundled data files).
std::filesystem::path source_dir();

/// Bundled 1000-record corpus.
std::filesystem::path mini_corpus_path();

/// A valid abstract of at least 200 characters.
std::string sample_abstract(std::uint64_t seed = 7);

}  // namespace testsupport
