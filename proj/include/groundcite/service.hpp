// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 groundcite contributors

#pragma once

#include <atomic>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "groundcite/config.hpp"
#include "groundcite/corpus_store.hpp"
#include "groundcite/corpus_sync.hpp"
#include "groundcite/error.hpp"
#include "groundcite/extract.hpp"
#include "groundcite/jobs.hpp"
#include "groundcite/pipeline.hpp"

namespace groundcite {

/// Transport-neutral view of an HTTP request. Header names are lowercase.
struct ApiRequest {
    std::string method;
    std::string path;
    std::map<std::string, std::string> query;
    std::map<std::string, std::string> headers;
    std::string body;
};

struct ApiResponse {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
    std::map<std::string, std::string> headers;
};

int http_status(ErrorCode code) noexcept;
/// {"error": {"code", "message", "field"?}}
ApiResponse error_response(const Error& e);

/// The generation service: request validation, job submission and polling,
/// and corpus synchronization. Jobs read the corpus under a shared lock;
/// sync takes it exclusively.
class Service {
public:
    Service(AppConfig cfg, std::shared_ptr<FlatCorpusStore> store, HashIndex index, PipelineBackends backends,
            std::shared_ptr<TextExtractor> upload_extractor = std::make_shared<AutoExtractor>());
    ~Service();

    /// Loads the store snapshot and hash index named in the configuration
    /// (empty when absent) and builds the configured backends.
    static std::unique_ptr<Service> from_config(const AppConfig& cfg);

    /// Routes /api/generate, /api/generate-pdf, /api/question,
    /// /api/jobs/{id}, /api/sync and /api/health.
    ApiResponse handle(const ApiRequest& request);

    // Operations behind the endpoints; all throw groundcite::Error.
    std::string submit_generate(const nlohmann::json& body);
    std::string submit_document(const std::string& bytes, const std::map<std::string, std::string>& query);
    std::string submit_question(const nlohmann::json& body);
    Job job(const std::string& job_id) const;
    /// Refuses with Error(kConflict) while another sync is running. Saves the
    /// store and index afterwards unless dry_run.
    SyncReport sync(const std::filesystem::path& snapshot, const SyncOptions& opts);

    JobManager& jobs() noexcept { return *jobs_; }
    const AppConfig& config() const noexcept { return cfg_; }
    std::size_t corpus_size() const;

    /// Runs the HTTP server on cfg.service.host:port until stop().
    /// Port 0 binds any free port; bound_port() reports it once listening.
    void serve();
    void stop();
    int bound_port() const noexcept { return bound_port_.load(); }
    bool wait_until_listening(std::chrono::milliseconds timeout) const;

private:
    GenerationParams parse_params_json(const nlohmann::json& body) const;
    GenerationParams parse_params_query(const std::map<std::string, std::string>& query) const;
    std::string checked_abstract(const nlohmann::json& body, const char* field, bool required) const;

    AppConfig cfg_;
    std::shared_ptr<FlatCorpusStore> store_;
    HashIndex index_;
    std::shared_ptr<TextExtractor> upload_extractor_;
    std::shared_ptr<Pipeline> pipeline_;
    NullTopicAssigner topics_;
    mutable std::shared_mutex corpus_mu_;
    std::atomic<bool> sync_running_{false};
    std::unique_ptr<JobManager> jobs_;

    struct Server;
    std::unique_ptr<Server> server_;
    std::atomic<int> bound_port_{0};
};

}  // namespace groundcite
