// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 groundcite contributors

#include <algorithm>
#include <array>
#include <atomic>
#include <condition_variable>
#include <fstream>
#include <mutex>
#include <thread>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "groundcite/corpus_sync.hpp"
#include "groundcite/hermetic.hpp"
#include "groundcite/http_client.hpp"
#include "groundcite/service.hpp"
#include "support/fixtures.hpp"
#include "support/pdf_writer.hpp"

using namespace groundcite;
using namespace std::chrono_literals;
using nlohmann::json;

namespace {

struct Harness {
    AppConfig cfg;
    std::shared_ptr<FlatCorpusStore> store;
    std::unique_ptr<Service> svc;
};

std::unique_ptr<Harness> make_harness(std::shared_ptr<LlmClient> llm = nullptr, bool empty_corpus = false) {
    auto h = std::make_unique<Harness>();
    const auto dir = testsupport::fresh_dir("service");
    h->cfg.service.job_dir = (dir / "jobs").string();
    h->cfg.corpus.store_path = (dir / "store.cgst").string();
    h->cfg.corpus.index_path = (dir / "index.cghx").string();
    h->cfg.service.admin_token = "s3cret";
    h->cfg.service.port = 0;
    h->store = std::make_shared<FlatCorpusStore>(h->cfg.embedder.dim);
    HashIndex index;
    if (!empty_corpus) {
        MockEmbedder emb(h->cfg.embedder);
        NullTopicAssigner topics;
        reload(testsupport::mini_corpus_path(), *h->store, index, emb, topics);
    }
    auto b = make_backends(h->cfg, h->store);
    if (llm) b.llm = std::move(llm);
    h->svc = std::make_unique<Service>(h->cfg, h->store, std::move(index), std::move(b));
    return h;
}

ApiRequest post(std::string path, const json& body) {
    ApiRequest r;
    r.method = "POST";
    r.path = std::move(path);
    r.body = body.dump();
    return r;
}

ApiRequest get(std::string path) {
    ApiRequest r;
    r.method = "GET";
    r.path = std::move(path);
    return r;
}

json body_of(const ApiResponse& r) { return json::parse(r.body); }

std::string error_field(const ApiResponse& r) {
    const auto j = body_of(r);
    return j.at("error").value("field", std::string());
}

json wait_done(Service& svc, const std::string& id) {
    const auto deadline = std::chrono::steady_clock::now() + 30s;
    while (std::chrono::steady_clock::now() < deadline) {
        const auto j = body_of(svc.handle(get("/api/jobs/" + id)));
        if (j.at("state") == "done" || j.at("state") == "failed") return j;
        std::this_thread::sleep_for(5ms);
    }
    return {};
}

// Lets the test hold the model (and therefore a running job) at will.
class GatedLlm final : public LlmClient {
public:
    std::string complete(const LlmRequest& r) override {
        std::unique_lock lock(mu_);
        ++waiting_;
        cv_.notify_all();
        cv_.wait(lock, [&] { return open_; });
        lock.unlock();
        return inner_.complete(r);
    }
    void wait_for_caller() {
        std::unique_lock lock(mu_);
        cv_.wait(lock, [&] { return waiting_ > 0; });
    }
    void open() {
        std::lock_guard lock(mu_);
        open_ = true;
        cv_.notify_all();
    }

private:
    HermeticLlm inner_;
    std::mutex mu_;
    std::condition_variable cv_;
    int waiting_ = 0;
    bool open_ = false;
};

}  // namespace

TEST(HttpStatus, Mapping) {
    EXPECT_EQ(http_status(ErrorCode::kValidation), 400);
    EXPECT_EQ(http_status(ErrorCode::kUnauthorized), 401);
    EXPECT_EQ(http_status(ErrorCode::kNotFound), 404);
    EXPECT_EQ(http_status(ErrorCode::kConflict), 409);
    EXPECT_EQ(http_status(ErrorCode::kPayloadTooLarge), 413);
    EXPECT_EQ(http_status(ErrorCode::kOverloaded), 503);
    EXPECT_EQ(http_status(ErrorCode::kLlmUnavailable), 502);
    EXPECT_EQ(http_status(ErrorCode::kIo), 500);
    const auto r = error_response(Error(ErrorCode::kOverloaded, "busy"));
    EXPECT_EQ(r.headers.at("Retry-After"), "5");
    EXPECT_EQ(body_of(r).at("error").at("code"), "overloaded");
    EXPECT_FALSE(body_of(r).at("error").contains("field"));
}

TEST(Service, GenerateAcceptsAndCompletes) {
    auto h = make_harness();
    const auto res = h->svc->handle(post("/api/generate", {{"abstract", testsupport::sample_abstract(3)},
                                                           {"breadth", 8}, {"depth", 2}, {"diversity", 0.3}}));
    ASSERT_EQ(res.status, 202) << res.body;
    const auto id = body_of(res).at("job_id").get<std::string>();
    EXPECT_TRUE(is_uuid(id));
    EXPECT_EQ(body_of(res).at("state"), "queued");
    const auto job = wait_done(*h->svc, id);
    ASSERT_EQ(job.at("state"), "done") << job.dump();
    const auto result = job.at("result").get<RelatedWorkResult>();
    EXPECT_FALSE(check_result_invariants(result).has_value());
    EXPECT_EQ(result.params_used, (GenerationParams{8, 2, 0.3}));
    EXPECT_FALSE(result.citations.empty());
}

TEST(Service, ValidationNamesTheField) {
    auto h = make_harness();
    auto& svc = *h->svc;
    const std::string ok = testsupport::sample_abstract(3);
    struct Case {
        json body;
        std::string field;
    };
    const std::vector<Case> cases = {
        {json::object(), "abstract"},
        {{{"abstract", 42}}, "abstract"},
        {{{"abstract", "too short"}}, "abstract"},
        {{{"abstract", std::string(20001, 'x')}}, "abstract"},
        {{{"abstract", ok}, {"breadth", 0}}, "breadth"},
        {{{"abstract", ok}, {"breadth", 51}}, "breadth"},
        {{{"abstract", ok}, {"breadth", "ten"}}, "breadth"},
        {{{"abstract", ok}, {"depth", 21}}, "depth"},
        {{{"abstract", ok}, {"diversity", 1.5}}, "diversity"},
        {{{"abstract", ok}, {"diversity", -0.1}}, "diversity"},
    };
    for (const auto& c : cases) {
        const auto r = svc.handle(post("/api/generate", c.body));
        EXPECT_EQ(r.status, 400) << c.body.dump().substr(0, 80);
        EXPECT_EQ(error_field(r), c.field) << c.body.dump().substr(0, 80);
        EXPECT_EQ(body_of(r).at("error").at("code"), "validation_error");
    }
    ApiRequest bad_json = post("/api/generate", {});
    bad_json.body = "{not json";
    EXPECT_EQ(svc.handle(bad_json).status, 400);
}

TEST(Service, AbstractLengthCountsCharacters) {
    auto h = make_harness();
    // 200 two-byte characters: 400 bytes but exactly at the lower limit.
    std::string text;
    for (int i = 0; i < 200; ++i) text += "\xC3\xA9";
    EXPECT_EQ(h->svc->handle(post("/api/generate", {{"abstract", text}})).status, 202);
    text.resize(text.size() - 2);
    EXPECT_EQ(h->svc->handle(post("/api/generate", {{"abstract", text}})).status, 400);
}

TEST(Service, UnknownJobsAndRoutes) {
    auto h = make_harness();
    auto& svc = *h->svc;
    EXPECT_EQ(svc.handle(get("/api/jobs/" + make_uuid())).status, 404);
    EXPECT_EQ(svc.handle(get("/api/jobs/not-a-uuid")).status, 404);
    EXPECT_EQ(svc.handle(get("/api/nothing")).status, 404);
    const auto wrong = svc.handle(get("/api/generate"));
    EXPECT_EQ(wrong.status, 405);
    EXPECT_EQ(wrong.headers.at("Allow"), "POST");
    const auto health = svc.handle(get("/api/health"));
    EXPECT_EQ(health.status, 200);
    EXPECT_EQ(body_of(health).at("corpus_size"), 1000);
}

TEST(Service, DocumentUploads) {
    auto h = make_harness();
    auto& svc = *h->svc;
    ApiRequest r;
    r.method = "POST";
    r.path = "/api/generate-pdf";

    r.body = "";
    auto res = svc.handle(r);
    EXPECT_EQ(res.status, 400);
    EXPECT_EQ(error_field(res), "document");

    r.body = std::string(h->cfg.service.max_upload_bytes + 1, 'a');
    res = svc.handle(r);
    EXPECT_EQ(res.status, 413);
    EXPECT_EQ(body_of(res).at("error").at("code"), "payload_too_large");

    r.body = std::string("\x89PNG\r\n\x1a\n\0\0", 10);
    EXPECT_EQ(error_field(svc.handle(r)), "document");

    r.body = testsupport::make_pdf({"References\n[1] Only references."});
    EXPECT_EQ(error_field(svc.handle(r)), "document");

    r.body = testsupport::make_pdf({"A Method\nAbstract\n" + testsupport::sample_abstract(11),
                                    "2 Approach\n" + testsupport::sample_abstract(12), "References\n[1] X."});
    r.query = {{"breadth", "abc"}};
    EXPECT_EQ(error_field(svc.handle(r)), "breadth");
    r.query = {{"breadth", "6"}, {"depth", "1"}};
    res = svc.handle(r);
    ASSERT_EQ(res.status, 202) << res.body;
    const auto job = wait_done(svc, body_of(res).at("job_id"));
    ASSERT_EQ(job.at("state"), "done") << job.dump();
    EXPECT_EQ(job.at("kind"), "document");
    EXPECT_EQ(job.at("result").at("params_used").at("breadth"), 6);
}

TEST(Service, Questions) {
    auto h = make_harness();
    auto& svc = *h->svc;
    const std::string abs = testsupport::sample_abstract(5);
    EXPECT_EQ(error_field(svc.handle(post("/api/question", {{"abstract", abs}}))), "question");
    EXPECT_EQ(error_field(svc.handle(post("/api/question", {{"abstract", abs}, {"question", "  "}}))), "question");
    EXPECT_EQ(error_field(svc.handle(post("/api/question", {{"question", "What is known?"}}))), "abstract");
    const auto res = svc.handle(post("/api/question", {{"abstract", abs}, {"question", "What is known?"}}));
    ASSERT_EQ(res.status, 202);
    const auto job = wait_done(svc, body_of(res).at("job_id"));
    EXPECT_EQ(job.at("state"), "done");
    EXPECT_EQ(job.at("kind"), "question");
}

TEST(Service, EmptyCorpusFailsTheJob) {
    auto h = make_harness(nullptr, true);
    const auto res = h->svc->handle(post("/api/generate", {{"abstract", testsupport::sample_abstract(1)}}));
    ASSERT_EQ(res.status, 202);
    const auto job = wait_done(*h->svc, body_of(res).at("job_id"));
    EXPECT_EQ(job.at("state"), "failed");
    EXPECT_EQ(job.at("error").at("code"), "empty_corpus");
}

TEST(Service, PollingIsMonotonic) {
    auto llm = std::make_shared<GatedLlm>();
    auto h = make_harness(llm);
    const auto res = h->svc->handle(post("/api/generate", {{"abstract", testsupport::sample_abstract(9)}}));
    const auto id = body_of(res).at("job_id").get<std::string>();
    llm->wait_for_caller();
    EXPECT_EQ(body_of(h->svc->handle(get("/api/jobs/" + id))).at("state"), "summarizing");
    llm->open();
    int last = 0;
    for (;;) {
        const auto j = body_of(h->svc->handle(get("/api/jobs/" + id)));
        const int now = static_cast<int>(parse_stage(j.at("state").get<std::string>()));
        EXPECT_GE(now, last);
        last = now;
        if (j.at("state") == "done" || j.at("state") == "failed") break;
    }
    EXPECT_EQ(last, static_cast<int>(Stage::kDone));
}

TEST(Service, SyncAuthAndRun) {
    auto h = make_harness();
    auto& svc = *h->svc;
    const auto dir = testsupport::fresh_dir("service-sync");
    const auto snap = dir / "dump.jsonl";
    auto extra = synthetic_corpus(1005, 99);
    extra.erase(extra.begin(), extra.begin() + 1000);
    std::ofstream(snap) << testsupport::to_dump(extra);
    const json body = {{"snapshot", snap.string()}};

    auto r = post("/api/sync", body);
    EXPECT_EQ(svc.handle(r).status, 401);
    r.headers["authorization"] = "Bearer wrong";
    EXPECT_EQ(svc.handle(r).status, 401);
    r.headers["authorization"] = "Bearer s3cret";
    auto dry = r;
    dry.body = json{{"snapshot", snap.string()}, {"dry_run", true}}.dump();
    auto res = svc.handle(dry);
    ASSERT_EQ(res.status, 200) << res.body;
    EXPECT_EQ(svc.corpus_size(), 1000u);
    EXPECT_FALSE(std::filesystem::exists(h->cfg.corpus.store_path));

    res = svc.handle(r);
    ASSERT_EQ(res.status, 200) << res.body;
    const auto report = body_of(res);
    const auto& counts = report.at("counts");
    EXPECT_EQ(counts.at("insert").get<int>() + counts.at("update").get<int>() + counts.at("no_change").get<int>(), 5);
    EXPECT_EQ(svc.corpus_size(), 1000u + counts.at("insert").get<std::size_t>());
    EXPECT_TRUE(std::filesystem::exists(h->cfg.corpus.store_path));
    EXPECT_EQ(FlatCorpusStore::load(h->cfg.corpus.store_path).count(), svc.corpus_size());
    EXPECT_EQ(HashIndex::load(h->cfg.corpus.index_path).size(), svc.corpus_size());

    ApiRequest alt = post("/api/sync", {{"snapshot", ""}});
    alt.headers["x-admin-token"] = "s3cret";
    EXPECT_EQ(error_field(svc.handle(alt)), "snapshot");
}

TEST(Service, SyncDisabledWithoutToken) {
    AppConfig cfg;
    cfg.service.job_dir = (testsupport::fresh_dir("svc-notoken") / "jobs").string();
    auto store = std::make_shared<FlatCorpusStore>(cfg.embedder.dim);
    Service svc(cfg, store, {}, make_backends(cfg, store));
    auto r = post("/api/sync", {{"snapshot", "/tmp/x"}});
    r.headers["authorization"] = "Bearer ";
    EXPECT_EQ(svc.handle(r).status, 401);
}

TEST(Service, ConcurrentSyncConflicts) {
    auto llm = std::make_shared<GatedLlm>();
    auto h = make_harness(llm);
    auto& svc = *h->svc;
    const auto snap = testsupport::fresh_dir("svc-conflict") / "dump.jsonl";
    std::ofstream(snap) << testsupport::to_dump(synthetic_corpus(3, 5));

    // A running job holds the corpus, so the first sync waits for it.
    svc.handle(post("/api/generate", {{"abstract", testsupport::sample_abstract(2)}}));
    llm->wait_for_caller();
    auto r = post("/api/sync", {{"snapshot", snap.string()}});
    r.headers["authorization"] = "Bearer s3cret";
    // Two syncs race for the flag; the loser must be refused while the
    // winner is still waiting for the job.
    std::array<ApiResponse, 2> out;
    std::atomic<int> finished{0};
    std::vector<std::thread> threads;
    for (int i = 0; i < 2; ++i) {
        threads.emplace_back([&, i] {
            out[static_cast<std::size_t>(i)] = svc.handle(r);
            ++finished;
        });
    }
    while (finished.load() == 0) std::this_thread::sleep_for(1ms);
    llm->open();
    for (auto& t : threads) t.join();
    std::vector<int> statuses = {out[0].status, out[1].status};
    std::sort(statuses.begin(), statuses.end());
    EXPECT_EQ(statuses, (std::vector<int>{200, 409}));
    const auto& refused = out[0].status == 409 ? out[0] : out[1];
    EXPECT_EQ(body_of(refused).at("error").at("code"), "conflict");
}

TEST(Service, LiveHttp) {
    auto h = make_harness();
    const auto web = testsupport::fresh_dir("web");
    std::ofstream(web / "index.html") << "<html>groundcite</html>";
    h->cfg.service.static_dir = web.string();
    // Rebuild with the static directory configured.
    auto b = make_backends(h->cfg, h->store);
    Service svc(h->cfg, h->store, index_from_store(*h->store), b);
    std::thread server([&] { svc.serve(); });
    ASSERT_TRUE(svc.wait_until_listening(10s));
    const std::string base = "http://127.0.0.1:" + std::to_string(svc.bound_port());
    auto transport = make_default_transport();

    HttpRequest health;
    health.url = base + "/api/health";
    auto res = transport->send(health);
    EXPECT_EQ(res.status, 200);
    EXPECT_EQ(json::parse(res.body).at("status"), "ok");

    HttpRequest submit;
    submit.method = "POST";
    submit.url = base + "/api/generate";
    submit.body = json{{"abstract", testsupport::sample_abstract(21)}}.dump();
    res = transport->send(submit);
    ASSERT_EQ(res.status, 202) << res.body;
    const auto id = json::parse(res.body).at("job_id").get<std::string>();
    std::string state;
    for (int i = 0; i < 3000 && state != "done" && state != "failed"; ++i) {
        HttpRequest poll;
        poll.url = base + "/api/jobs/" + id;
        state = json::parse(transport->send(poll).body).at("state").get<std::string>();
        std::this_thread::sleep_for(5ms);
    }
    EXPECT_EQ(state, "done");

    HttpRequest page;
    page.url = base + "/index.html";
    res = transport->send(page);
    EXPECT_EQ(res.status, 200);
    EXPECT_NE(res.body.find("groundcite"), std::string::npos);

    HttpRequest missing;
    missing.url = base + "/api/jobs/" + make_uuid();
    res = transport->send(missing);
    EXPECT_EQ(res.status, 404);
    EXPECT_EQ(json::parse(res.body).at("error").at("code"), "not_found");

    svc.stop();
    server.join();
}
