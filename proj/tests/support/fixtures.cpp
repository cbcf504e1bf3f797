// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 groundcite contributors

#include "support/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <unistd.h>

#include "groundcite/hermetic.hpp"

namespace testsupport {

EmbeddingVector random_unit(std::mt19937_64& rng, std::size_t dim) {
    std::normal_distribution<double> nd(0.0, 1.0);
    std::vector<double> v(dim);
    for (auto& x : v) x = nd(rng);
    return EmbeddingVector::normalized(std::move(v));
}

std::vector<SelectionCandidate> random_pool(std::mt19937_64& rng, std::size_t size, std::size_t dim) {
    const auto query = random_unit(rng, dim);
    std::vector<SelectionCandidate> pool;
    for (std::size_t i = 0; i < size; ++i) {
        SelectionCandidate c;
        c.id = "c" + std::to_string(i);
        c.embedding = random_unit(rng, dim);
        double s = 0.0;
        for (std::size_t d = 0; d < dim; ++d) s += c.embedding[d] * query[d];
        c.query_similarity = s;
        pool.push_back(std::move(c));
    }
    return pool;
}

namespace {
double plain_dot(const EmbeddingVector& a, const EmbeddingVector& b) {
    double s = 0.0;
    for (std::size_t d = 0; d < a.dim(); ++d) s += a[d] * b[d];
    return s;
}
}  // namespace

std::vector<std::string> oracle_select(const std::vector<SelectionCandidate>& pool, std::size_t n, double w) {
    std::vector<std::size_t> chosen;
    std::vector<std::string> out;
    while (chosen.size() < n) {
        std::size_t best = pool.size();
        double best_score = 0.0;
        for (std::size_t i = 0; i < pool.size(); ++i) {
            if (std::find(chosen.begin(), chosen.end(), i) != chosen.end()) continue;
            double score;
            if (chosen.empty()) {
                score = pool[i].query_similarity;
            } else {
                double m = INFINITY;
                for (std::size_t j : chosen) m = std::min(m, plain_dot(pool[i].embedding, pool[j].embedding));
                score = (1.0 - w) * pool[i].query_similarity + w * (1.0 - m);
            }
            if (best == pool.size() || score > best_score || (score == best_score && pool[i].id < pool[best].id)) {
                best = i;
                best_score = score;
            }
        }
        chosen.push_back(best);
        out.push_back(pool[best].id);
    }
    return out;
}

std::vector<std::string> oracle_top_n(const std::vector<SelectionCandidate>& pool, std::size_t n) {
    std::vector<const SelectionCandidate*> sorted;
    for (const auto& c : pool) sorted.push_back(&c);
    std::sort(sorted.begin(), sorted.end(), [](const SelectionCandidate* a, const SelectionCandidate* b) {
        if (a->query_similarity != b->query_similarity) return a->query_similarity > b->query_similarity;
        return a->id < b->id;
    });
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(sorted[i]->id);
    return out;
}

std::vector<SearchHit> brute_force_search(const std::vector<groundcite::PaperRecord>& records,
                                          const EmbeddingVector& query, std::size_t k) {
    std::vector<SearchHit> all;
    for (const auto& r : records) all.push_back({r.arxiv_id, plain_dot(r.embedding, query)});
    std::sort(all.begin(), all.end(), [](const SearchHit& a, const SearchHit& b) {
        if (a.similarity != b.similarity) return a.similarity > b.similarity;
        return a.arxiv_id < b.arxiv_id;
    });
    if (all.size() > k) all.resize(k);
    return all;
}

std::string store_bytes(const groundcite::CorpusStore& store) {
    std::vector<groundcite::PaperRecord> records;
    for (const auto& id : store.ids()) records.push_back(*store.get(id));
    return groundcite::encode_snapshot(store.dim(), records);
}

std::string to_dump(const std::vector<PaperMetadata>& records) {
    std::string out;
    for (const auto& r : records) out += groundcite::to_metadata_line(r) + "\n";
    return out;
}

SyncFixture make_sync_fixture(std::size_t base_n, std::size_t mutated, std::size_t fresh, std::size_t omitted,
                              std::uint64_t seed) {
    auto all = groundcite::synthetic_corpus(base_n + fresh, seed);
    SyncFixture f;
    f.base.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(base_n));

    std::vector<std::size_t> order(base_n);
    for (std::size_t i = 0; i < base_n; ++i) order[i] = i;
    std::mt19937_64 rng(seed ^ 0x5eedULL);
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<PaperMetadata> snapshot;
    for (std::size_t k = 0; k < base_n; ++k) {
        PaperMetadata m = f.base[order[k]];
        if (k < omitted) {
            f.omitted.insert(m.arxiv_id);
            continue;
        }
        if (k < omitted + mutated) {
            m.abstract += " We additionally report results on a revised benchmark (edit " + std::to_string(k) + ").";
            f.mutated.insert(m.arxiv_id);
        } else {
            f.unchanged.insert(m.arxiv_id);
        }
        snapshot.push_back(std::move(m));
    }
    for (std::size_t i = base_n; i < all.size(); ++i) {
        f.fresh.insert(all[i].arxiv_id);
        snapshot.push_back(all[i]);
    }
    std::shuffle(snapshot.begin(), snapshot.end(), rng);
    f.snapshot = snapshot;
    f.full = snapshot;
    for (const auto& m : f.base) {
        if (f.omitted.count(m.arxiv_id)) f.full.push_back(m);
    }
    return f;
}

std::filesystem::path fresh_dir(const std::string& name) {
    static int counter = 0;
    auto dir = std::filesystem::temp_directory_path() /
               ("groundcite-test-" + std::to_string(::getpid()) + "-" + name + "-" + std::to_string(counter++));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::filesystem::path source_dir() { return GROUNDCITE_SOURCE_DIR; }

std::filesystem::path mini_corpus_path() { return source_dir() / "data" / "mini_corpus.jsonl"; }

std::string sample_abstract(std::uint64_t seed) { return groundcite::synthetic_abstract(seed); }

}  // namespace testsupport
