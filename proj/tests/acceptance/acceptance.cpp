// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 groundcite contributors

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <regex>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "groundcite/content_hash.hpp"
#include "groundcite/corpus_sync.hpp"
#include "groundcite/evaluation.hpp"
#include "groundcite/fulltext.hpp"
#include "groundcite/greedy_select.hpp"
#include "groundcite/hermetic.hpp"
#include "groundcite/pipeline.hpp"
#include "groundcite/retrieval.hpp"
#include "groundcite/service.hpp"
#include "groundcite/synthesis.hpp"
#include "support/fixtures.hpp"

using namespace groundcite;
using nlohmann::json;

namespace {

// Thrown by check() to end a criterion with a reason.
struct Failed {
    std::string why;
};

void check(bool ok, const std::string& why) {
    if (!ok) throw Failed{why};
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

int g_failures = 0;

void criterion(int number, const std::string& name, double limit_s, const std::function<std::string()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out.detail = body();
        out.pass = true;
    } catch (const Failed& f) {
        out.detail = f.why;
    } catch (const std::exception& e) {
        out.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (out.pass && limit_s > 0 && secs >= limit_s) {
        out.pass = false;
        out.detail = "took " + std::to_string(secs) + " s, limit " + std::to_string(limit_s) + " s";
    }
    if (!out.pass) ++g_failures;
    std::printf("%s [%2d] %-34s %8.3f s  %s\n", out.pass ? "PASS" : "FAIL", number, name.c_str(), secs,
                out.detail.c_str());
    std::fflush(stdout);
}

std::string file_bytes(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

EmbedderConfig mock_config(std::size_t dim) {
    EmbedderConfig cfg;
    cfg.dim = dim;
    return cfg;
}

std::string oracle_equivalence() {
    std::size_t checked = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        std::mt19937_64 rng(seed);
        for (std::size_t size = 1; size <= 7; ++size) {
            const auto pool = testsupport::random_pool(rng, size, 8);
            for (std::size_t n = 1; n <= std::min<std::size_t>(5, size); ++n) {
                for (double w : {0.0, 0.25, 0.5, 0.75, 1.0}) {
                    const auto got = greedy_select(pool, n, w).ids();
                    check(got == testsupport::oracle_select(pool, n, w),
                          "seed " + std::to_string(seed) + " size " + std::to_string(size) + " n " +
                              std::to_string(n) + " w " + std::to_string(w));
                    ++checked;
                }
            }
        }
    }
    return std::to_string(checked) + " selections match the oracle";
}

std::string w0_reduction() {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 1000; ++i) {
        const std::size_t size = 1 + rng() % 40;
        const std::size_t n = 1 + rng() % size;
        const auto pool = testsupport::random_pool(rng, size, 16);
        check(greedy_select(pool, n, 0.0).ids() == testsupport::oracle_top_n(pool, n), "pool " + std::to_string(i));
    }
    return "1000 pools";
}

std::string dominance() {
    std::mt19937_64 rng(77);
    for (int i = 0; i < 500; ++i) {
        const std::size_t size = 2 + rng() % 30;
        const std::size_t n = 1 + rng() % size;
        const auto pool = testsupport::random_pool(rng, size, 16);
        auto mean_s = [&](double w) {
            std::vector<double> s;
            for (const auto& c : greedy_select(pool, n, w).selected) s.push_back(c.query_similarity);
            // Summing in sorted order makes equal sets give bit-equal means.
            std::sort(s.begin(), s.end());
            double sum = 0.0;
            for (double x : s) sum += x;
            return sum / static_cast<double>(s.size());
        };
        const double base = mean_s(0.0);
        for (double w : {0.3, 0.7, 1.0}) check(base >= mean_s(w), "pool " + std::to_string(i) + " w " + std::to_string(w));
    }
    return "500 pools x 3 weights";
}

std::string exact_search() {
    const MockEmbedder emb(mock_config(768));
    FlatCorpusStore store(emb.dim());
    std::vector<PaperRecord> records;
    for (const auto& m : synthetic_corpus(10000, 5)) {
        records.push_back(make_record(m, emb.embed_one(m.abstract)));
        store.upsert(records.back());
    }
    check(store.count() == 10000, "store holds " + std::to_string(store.count()) + " records");
    std::mt19937_64 rng(6);
    for (int q = 0; q < 50; ++q) {
        const auto query = testsupport::random_unit(rng, emb.dim());
        check(store.search(query, 10) == testsupport::brute_force_search(records, query, 10),
              "query " + std::to_string(q));
    }
    return "50 queries over 10000 records";
}

std::string sync_three_cases() {
    const auto f = testsupport::make_sync_fixture(1000, 100, 50, 50, 31);
    FlatCorpusStore store(64);
    HashIndex index;
    const MockEmbedder emb(mock_config(64));
    NullTopicAssigner topics;
    auto run = [&](const std::vector<PaperMetadata>& recs) {
        std::istringstream in(testsupport::to_dump(recs));
        return reload(in, store, index, emb, topics);
    };
    run(f.base);
    check(f.snapshot.size() == 1000, "snapshot has " + std::to_string(f.snapshot.size()) + " records");

    auto before = emb.texts_submitted();
    const auto r1 = run(f.snapshot);
    check(r1.no_change == 850 && r1.updated == 100 && r1.inserted == 50,
          "counts " + std::to_string(r1.no_change) + "/" + std::to_string(r1.updated) + "/" +
              std::to_string(r1.inserted));
    check(emb.texts_submitted() - before == 150, "embedded " + std::to_string(emb.texts_submitted() - before) +
                                                     " texts for 150 changed records");

    before = emb.texts_submitted();
    const auto r2 = run(f.full);
    check(r2.no_change == 1050 && r2.updated == 0 && r2.inserted == 0, "second reload not all NoChange");
    const auto r3 = run(f.snapshot);
    check(r3.no_change == 1000 && r3.updated == 0 && r3.inserted == 0, "repeated snapshot not all NoChange");
    check(emb.texts_submitted() == before, "NoChange records were embedded");
    return "{850,100,50} then {1050,0,0}; 150 embeds";
}

std::string sha256_vectors() {
    check(to_hex(compute_hash("abc")) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad", "abc");
    check(to_hex(compute_hash("")) == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855", "empty");
    return "abc, empty";
}

std::string batch_invariance() {
    const auto f = testsupport::make_sync_fixture(600, 60, 40, 20, 12);
    const auto dir = testsupport::fresh_dir("acceptance-batch");
    std::optional<std::string> ref_bytes, ref_index;
    std::optional<SyncReport> ref;
    for (std::size_t batch : {1u, 7u, 512u}) {
        FlatCorpusStore store(32);
        HashIndex index;
        const MockEmbedder emb(mock_config(32));
        NullTopicAssigner topics;
        std::istringstream base(testsupport::to_dump(f.base));
        reload(base, store, index, emb, topics, {batch, false});
        std::istringstream snap(testsupport::to_dump(f.snapshot));
        auto report = reload(snap, store, index, emb, topics, {batch, false});
        const auto path = dir / ("store-" + std::to_string(batch) + ".cgst");
        store.save(path);
        const auto bytes = file_bytes(path);
        if (!ref) {
            ref_bytes = bytes;
            ref_index = index.encode();
            ref = report;
            continue;
        }
        check(bytes == *ref_bytes, "store snapshot differs at batch size " + std::to_string(batch));
        check(index.encode() == *ref_index, "hash index differs at batch size " + std::to_string(batch));
        report.batch_count = ref->batch_count;  // the number of batches is the one intended difference
        check(report.same_outcome(*ref), "report differs at batch size " + std::to_string(batch));
    }
    return "batch sizes 1, 7, 512";
}

std::string grounding() {
    const std::vector<std::string> shortlist = {"2301.00001", "2302.00042", "2105.12345", "1912.00777"};
    const std::vector<std::string> invalid = {"9912.99999", "2301.00009", "", "not-an-id"};
    const std::vector<std::string> filler = {"Prior work", "studied", "graphs.", "[3]", "[1, 2]", "(see", "also)"};
    std::mt19937_64 rng(555);
    for (int trial = 0; trial < 1000; ++trial) {
        std::string draft = "Related Work\n\n";
        std::set<std::string> used_invalid;
        const std::size_t parts = 1 + rng() % 30;
        for (std::size_t i = 0; i < parts; ++i) {
            switch (rng() % 3) {
                case 0: draft += filler[rng() % filler.size()]; break;
                case 1: draft += citation_token(shortlist[rng() % shortlist.size()]); break;
                default: {
                    const auto& id = invalid[rng() % invalid.size()];
                    used_invalid.insert(id.empty() ? "(empty)" : id);
                    draft += citation_token(id);
                }
            }
            draft += " ";
        }
        const auto r = finalize(draft, shortlist, nullptr);
        const std::set<std::string> allowed(shortlist.begin(), shortlist.end());
        for (const auto& c : r.citations) check(allowed.count(c.arxiv_id) == 1, "citation outside shortlist");
        if (auto bad = check_result_invariants(r)) throw Failed{"trial " + std::to_string(trial) + ": " + *bad};
        for (const auto& id : used_invalid) {
            bool warned = false;
            for (const auto& w : r.warnings) warned |= w.find(id) != std::string::npos;
            check(warned, "no warning for invalid token " + id);
        }
    }
    return "1000 drafts";
}

struct HermeticService {
    AppConfig cfg;
    std::shared_ptr<FlatCorpusStore> store;
    std::unique_ptr<Service> svc;
};

HermeticService hermetic_service() {
    HermeticService h;
    h.cfg.service.job_dir = (testsupport::fresh_dir("acceptance-jobs") / "jobs").string();
    h.cfg.corpus.store_path.clear();
    h.cfg.corpus.index_path.clear();
    h.store = std::make_shared<FlatCorpusStore>(h.cfg.embedder.dim);
    HashIndex index;
    MockEmbedder emb(h.cfg.embedder);
    NullTopicAssigner topics;
    reload(testsupport::mini_corpus_path(), *h.store, index, emb, topics);
    auto backends = make_backends(h.cfg, h.store);
    h.svc = std::make_unique<Service>(h.cfg, h.store, std::move(index), std::move(backends));
    return h;
}

json run_job(Service& svc, const std::string& abstract) {
    ApiRequest req;
    req.method = "POST";
    req.path = "/api/generate";
    req.body = json{{"abstract", abstract}}.dump();
    const auto res = svc.handle(req);
    check(res.status == 202, "submit returned " + std::to_string(res.status) + ": " + res.body);
    const auto id = json::parse(res.body).at("job_id").get<std::string>();
    ApiRequest poll;
    poll.method = "GET";
    poll.path = "/api/jobs/" + id;
    for (;;) {
        auto j = json::parse(svc.handle(poll).body);
        if (j.at("state") == "done" || j.at("state") == "failed") return j;
        std::this_thread::sleep_for(std::chrono::milliseconds(2));
    }
}

std::string end_to_end() {
    auto h = hermetic_service();
    check(h.store->count() == 1000, "mini corpus holds " + std::to_string(h.store->count()) + " records");
    const std::string abstract = testsupport::sample_abstract(2025);
    const auto a = run_job(*h.svc, abstract);
    check(a.at("state") == "done", "job ended " + a.dump());
    const auto result = a.at("result").get<RelatedWorkResult>();
    check(result.params_used == GenerationParams{10, 2, 0.0}, "defaults not used");
    check(result.shortlist_ids.size() <= 12, "shortlist has " + std::to_string(result.shortlist_ids.size()));
    if (auto bad = check_result_invariants(result)) throw Failed{*bad};
    check(!result.citations.empty(), "no citations");
    const auto b = run_job(*h.svc, abstract);
    check(a.at("result").dump() == b.at("result").dump(), "result JSON differs between runs");
    return std::to_string(result.citations.size()) + " citations, shortlist " +
           std::to_string(result.shortlist_ids.size());
}

std::string depth_diversity() {
    AppConfig cfg;
    auto store = std::make_shared<FlatCorpusStore>(cfg.embedder.dim);
    HashIndex index;
    auto emb = std::make_shared<MockEmbedder>(cfg.embedder);
    NullTopicAssigner topics;
    reload(testsupport::mini_corpus_path(), *store, index, *emb, topics);
    const auto query = emb->embed_one(testsupport::sample_abstract(2025));

    const auto plain = build_longlist(query, {10, 2, 0.0}, *store, cfg.pipeline.retrieval);
    const auto diverse = build_longlist(query, {10, 2, 0.3}, *store, cfg.pipeline.retrieval);
    check(plain.ids() != diverse.ids(), "diversity 0.3 left the longlist unchanged");
    check(plain.ids().front() == diverse.ids().front(), "first pick changed with diversity");

    const auto backends = make_backends(cfg, store);
    std::size_t docs = 0;
    for (const auto& id : plain.ids()) {
        const auto doc = backends.fetcher->fetch_fulltext(id);
        if (!doc.usable()) continue;
        const auto scored = score_pages(doc, query, *emb);
        std::set<std::size_t> shallow, deep;
        for (const auto& p : select_pages(scored, 2, 0.0)) shallow.insert(p.page_index);
        for (const auto& p : select_pages(scored, 6, 0.0)) deep.insert(p.page_index);
        check(std::includes(deep.begin(), deep.end(), shallow.begin(), shallow.end()),
              "depth 6 pages are not a superset for " + id);
        check(deep.size() > shallow.size() || deep.size() == scored.size(), "depth 6 added no pages for " + id);
        ++docs;
    }
    check(docs > 0, "no documents fetched");
    return "longlist changed, first pick kept; supersets on " + std::to_string(docs) + " documents";
}

std::string evaluation_arithmetic() {
    std::vector<JudgeScore> scores;
    const std::vector<int> values = {7, 7, 7, 7, 7, 7, 7, 7, 6, 7};
    for (std::size_t i = 0; i < values.size(); ++i) {
        scores.push_back({"judge", "item" + std::to_string(i), Metric::kRelevance, values[i], ""});
    }
    const auto report = aggregate(scores);
    const auto& s = report.metrics.at(Metric::kRelevance);
    check(s.sum == 69, "sum " + std::to_string(s.sum));
    check(std::abs(s.mean - 6.9) < 1e-9, "mean " + std::to_string(s.mean));
    check(std::abs(10.0 * s.mean - static_cast<double>(s.sum)) < 1e-9, "sum != 10 x mean");
    const std::string ref = json(report).dump();
    std::mt19937_64 rng(42);
    for (int i = 0; i < 100; ++i) {
        std::shuffle(scores.begin(), scores.end(), rng);
        check(json(aggregate(scores)).dump() == ref, "shuffle " + std::to_string(i) + " changed the report");
    }
    return "sum 69, mean 6.90, 100 shuffles";
}

}  // namespace

int main() {
    criterion(1, "selection oracle equivalence", 10, oracle_equivalence);
    criterion(2, "w = 0 reduction", 5, w0_reduction);
    criterion(3, "mean-similarity dominance", 0, dominance);
    criterion(4, "exact search", 30, exact_search);
    criterion(5, "sync three-case correctness", 20, sync_three_cases);
    criterion(6, "SHA-256 conformance", 0, sha256_vectors);
    criterion(7, "batch invariance", 0, batch_invariance);
    criterion(8, "grounding guarantee", 5, grounding);
    criterion(9, "end-to-end hermetic run", 60, end_to_end);
    criterion(10, "depth/diversity behavior", 0, depth_diversity);
    criterion(11, "evaluation arithmetic", 0, evaluation_arithmetic);
    std::printf("%d of 11 criteria failed\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
