// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 groundcite contributors

#include "groundcite/service.hpp"

#include <charconv>

#include <nlohmann/json.hpp>

#include "groundcite/text_clean.hpp"
#include "service_server.hpp"
#include "text_util.hpp"

namespace groundcite {

namespace {

using nlohmann::json;

std::size_t utf8_length(std::string_view s) {
    std::size_t n = 0;
    for (unsigned char c : s) {
        if ((c & 0xC0) != 0x80) ++n;
    }
    return n;
}

json parse_body(const std::string& body) {
    try {
        json j = json::parse(body);
        if (!j.is_object()) throw validation_error("body", "request body must be a JSON object");
        return j;
    } catch (const json::parse_error&) {
        throw validation_error("body", "request body is not valid JSON");
    }
}

ApiResponse json_response(int status, const json& body) {
    ApiResponse r;
    r.status = status;
    r.body = body.dump();
    return r;
}

ApiResponse accepted(const std::string& job_id) {
    return json_response(202, {{"job_id", job_id}, {"state", stage_name(Stage::kQueued)}});
}

int parse_int_field(const std::string& text, const char* field) {
    int v = 0;
    const auto* end = text.data() + text.size();
    auto [p, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || p != end) throw validation_error(field, std::string(field) + " must be an integer");
    return v;
}

double parse_double_field(const std::string& text, const char* field) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used == text.size()) return v;
    } catch (const std::exception&) {
    }
    throw validation_error(field, std::string(field) + " must be a number");
}

// Compares every byte regardless of where the first mismatch is.
bool tokens_equal(std::string_view given, std::string_view expected) {
    if (given.size() != expected.size()) return false;
    unsigned char diff = 0;
    for (std::size_t i = 0; i < given.size(); ++i) diff |= static_cast<unsigned char>(given[i] ^ expected[i]);
    return diff == 0;
}

}  // namespace

int http_status(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::kValidation:
        case ErrorCode::kParse: return 400;
        case ErrorCode::kUnauthorized: return 401;
        case ErrorCode::kNotFound: return 404;
        case ErrorCode::kConflict: return 409;
        case ErrorCode::kPayloadTooLarge: return 413;
        case ErrorCode::kOverloaded:
        case ErrorCode::kEmptyCorpus: return 503;
        case ErrorCode::kEmbeddingUnavailable:
        case ErrorCode::kLlmUnavailable:
        case ErrorCode::kTransport: return 502;
        default: return 500;
    }
}

ApiResponse error_response(const Error& e) {
    json err = {{"code", error_code_name(e.code())}, {"message", e.what()}};
    if (!e.field().empty()) err["field"] = e.field();
    ApiResponse r = json_response(http_status(e.code()), {{"error", err}});
    if (e.code() == ErrorCode::kOverloaded) r.headers["Retry-After"] = "5";
    return r;
}

Service::Service(AppConfig cfg, std::shared_ptr<FlatCorpusStore> store, HashIndex index, PipelineBackends backends,
                 std::shared_ptr<TextExtractor> upload_extractor)
    : cfg_(std::move(cfg)),
      store_(std::move(store)),
      index_(std::move(index)),
      upload_extractor_(std::move(upload_extractor)),
      server_(std::make_unique<Server>()) {
    backends.store = store_;
    pipeline_ = std::make_shared<Pipeline>(std::move(backends), cfg_.pipeline, cfg_.llm);
    JobManager::Options jo;
    jo.workers = cfg_.service.workers;
    jo.queue_capacity = cfg_.service.queue_capacity;
    jo.dir = cfg_.service.job_dir;
    jo.ttl = cfg_.service.job_ttl;
    jobs_ = std::make_unique<JobManager>(
        [this](const GenerationRequest& req, const StageCallback& cb) {
            std::shared_lock lock(corpus_mu_);
            return pipeline_->run(req, cb);
        },
        jo);
}

Service::~Service() {
    stop();
    jobs_->shutdown();
}

std::unique_ptr<Service> Service::from_config(const AppConfig& cfg) {
    std::shared_ptr<FlatCorpusStore> store;
    std::error_code ec;
    if (!cfg.corpus.store_path.empty() && std::filesystem::exists(cfg.corpus.store_path, ec)) {
        store = std::make_shared<FlatCorpusStore>(FlatCorpusStore::load(cfg.corpus.store_path));
        if (store->dim() != cfg.embedder.dim) {
            throw validation_error("embedder.dim", "store dimension " + std::to_string(store->dim()) +
                                                       " does not match the embedder dimension " +
                                                       std::to_string(cfg.embedder.dim));
        }
    } else {
        store = std::make_shared<FlatCorpusStore>(cfg.embedder.dim);
    }
    HashIndex index;
    if (!cfg.corpus.index_path.empty() && std::filesystem::exists(cfg.corpus.index_path, ec)) {
        index = HashIndex::load(cfg.corpus.index_path);
    } else {
        index = index_from_store(*store);
    }
    auto backends = make_backends(cfg, store);
    return std::make_unique<Service>(cfg, store, std::move(index), std::move(backends));
}

std::size_t Service::corpus_size() const { return store_->count(); }

GenerationParams Service::parse_params_json(const json& body) const {
    GenerationParams p;
    if (auto it = body.find("breadth"); it != body.end() && !it->is_null()) {
        if (!it->is_number_integer()) throw validation_error("breadth", "breadth must be an integer");
        p.breadth = it->get<int>();
    }
    if (auto it = body.find("depth"); it != body.end() && !it->is_null()) {
        if (!it->is_number_integer()) throw validation_error("depth", "depth must be an integer");
        p.depth = it->get<int>();
    }
    if (auto it = body.find("diversity"); it != body.end() && !it->is_null()) {
        if (!it->is_number()) throw validation_error("diversity", "diversity must be a number");
        p.diversity = it->get<double>();
    }
    validate_params(p);
    return p;
}

GenerationParams Service::parse_params_query(const std::map<std::string, std::string>& query) const {
    GenerationParams p;
    if (auto it = query.find("breadth"); it != query.end()) p.breadth = parse_int_field(it->second, "breadth");
    if (auto it = query.find("depth"); it != query.end()) p.depth = parse_int_field(it->second, "depth");
    if (auto it = query.find("diversity"); it != query.end()) p.diversity = parse_double_field(it->second, "diversity");
    validate_params(p);
    return p;
}

std::string Service::checked_abstract(const json& body, const char* field, bool required) const {
    auto it = body.find(field);
    if (it == body.end() || it->is_null()) {
        if (required) throw validation_error(field, std::string(field) + " is required");
        return {};
    }
    if (!it->is_string()) throw validation_error(field, std::string(field) + " must be a string");
    const std::string text = it->get<std::string>();
    const std::size_t n = utf8_length(detail::trim(text));
    if (n < cfg_.service.min_abstract_chars || n > cfg_.service.max_abstract_chars) {
        throw validation_error(field, std::string(field) + " must be between " +
                                          std::to_string(cfg_.service.min_abstract_chars) + " and " +
                                          std::to_string(cfg_.service.max_abstract_chars) + " characters");
    }
    return text;
}

std::string Service::submit_generate(const json& body) {
    GenerationRequest req;
    req.abstract = checked_abstract(body, "abstract", true);
    req.params = parse_params_json(body);
    return jobs_->submit(std::move(req));
}

std::string Service::submit_document(const std::string& bytes, const std::map<std::string, std::string>& query) {
    if (bytes.empty()) throw validation_error("document", "the uploaded document is empty");
    if (bytes.size() > cfg_.service.max_upload_bytes) {
        throw Error(ErrorCode::kPayloadTooLarge,
                    "the upload exceeds the limit of " + std::to_string(cfg_.service.max_upload_bytes) + " bytes",
                    "document");
    }
    GenerationRequest req;
    req.input = InputKind::kDocument;
    req.params = parse_params_query(query);
    try {
        req.document_pages = upload_extractor_->extract(bytes);
    } catch (const Error& e) {
        throw validation_error("document", std::string("the document could not be read: ") + e.what());
    }
    if (clean_document(req.document_pages).empty()) {
        throw validation_error("document", "the document contains no usable text");
    }
    return jobs_->submit(std::move(req));
}

std::string Service::submit_question(const json& body) {
    GenerationRequest req;
    auto q = body.find("question");
    if (q == body.end() || !q->is_string() || detail::trim(q->get<std::string>()).empty()) {
        throw validation_error("question", "question must be a non-empty string");
    }
    req.question = detail::trim(q->get<std::string>());
    req.abstract = checked_abstract(body, "abstract", true);
    req.params = parse_params_json(body);
    return jobs_->submit(std::move(req));
}

Job Service::job(const std::string& job_id) const {
    auto j = is_uuid(job_id) ? jobs_->get(job_id) : std::nullopt;
    if (!j) throw Error(ErrorCode::kNotFound, "unknown or expired job " + job_id, "job_id");
    return *j;
}

SyncReport Service::sync(const std::filesystem::path& snapshot, const SyncOptions& opts) {
    bool expected = false;
    if (!sync_running_.compare_exchange_strong(expected, true)) {
        throw Error(ErrorCode::kConflict, "a sync is already running");
    }
    struct Reset {
        std::atomic<bool>& flag;
        ~Reset() { flag = false; }
    } reset{sync_running_};

    std::unique_lock lock(corpus_mu_);
    auto report = reload(snapshot, *store_, index_, *pipeline_->backends().embedder, topics_, opts);
    if (!opts.dry_run) {
        if (!cfg_.corpus.store_path.empty()) store_->save(cfg_.corpus.store_path);
        if (!cfg_.corpus.index_path.empty()) index_.save(cfg_.corpus.index_path);
    }
    return report;
}

ApiResponse Service::handle(const ApiRequest& r) {
    try {
        const std::string& p = r.path;
        auto only = [&](const char* method) {
            if (r.method != method) {
                ApiResponse res = json_response(
                    405, {{"error", {{"code", "method_not_allowed"}, {"message", r.method + " is not allowed on " + p}}}});
                res.headers["Allow"] = method;
                return std::optional<ApiResponse>(res);
            }
            return std::optional<ApiResponse>();
        };

        if (p == "/api/generate") {
            if (auto bad = only("POST")) return *bad;
            return accepted(submit_generate(parse_body(r.body)));
        }
        if (p == "/api/generate-pdf") {
            if (auto bad = only("POST")) return *bad;
            return accepted(submit_document(r.body, r.query));
        }
        if (p == "/api/question") {
            if (auto bad = only("POST")) return *bad;
            return accepted(submit_question(parse_body(r.body)));
        }
        if (p.rfind("/api/jobs/", 0) == 0) {
            if (auto bad = only("GET")) return *bad;
            return json_response(200, job(p.substr(std::string("/api/jobs/").size())));
        }
        if (p == "/api/sync") {
            if (auto bad = only("POST")) return *bad;
            std::string token;
            if (auto it = r.headers.find("authorization"); it != r.headers.end() && it->second.rfind("Bearer ", 0) == 0) {
                token = detail::trim(it->second.substr(7));
            } else if (auto it2 = r.headers.find("x-admin-token"); it2 != r.headers.end()) {
                token = detail::trim(it2->second);
            }
            if (cfg_.service.admin_token.empty()) {
                throw Error(ErrorCode::kUnauthorized, "sync is disabled: no admin token is configured");
            }
            if (!tokens_equal(token, cfg_.service.admin_token)) {
                throw Error(ErrorCode::kUnauthorized, "a valid admin token is required");
            }
            const json body = parse_body(r.body);
            auto snap = body.find("snapshot");
            if (snap == body.end() || !snap->is_string() || snap->get<std::string>().empty()) {
                throw validation_error("snapshot", "snapshot path is required");
            }
            SyncOptions opts;
            opts.batch_size = cfg_.corpus.sync_batch_size;
            if (auto it = body.find("batch_size"); it != body.end()) {
                if (!it->is_number_unsigned() || it->get<std::size_t>() == 0) {
                    throw validation_error("batch_size", "batch_size must be a positive integer");
                }
                opts.batch_size = it->get<std::size_t>();
            }
            if (auto it = body.find("dry_run"); it != body.end()) {
                if (!it->is_boolean()) throw validation_error("dry_run", "dry_run must be a boolean");
                opts.dry_run = it->get<bool>();
            }
            return json_response(200, sync(snap->get<std::string>(), opts));
        }
        if (p == "/api/health") {
            if (auto bad = only("GET")) return *bad;
            return json_response(200, {{"status", "ok"}, {"corpus_size", corpus_size()}, {"queued", jobs_->queued()}});
        }
        throw Error(ErrorCode::kNotFound, "no such endpoint: " + p);
    } catch (const Error& e) {
        return error_response(e);
    }
}

}  // namespace groundcite
