// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 groundcite contributors

#pragma once

#include <chrono>
#include <condition_variable>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "groundcite/error.hpp"
#include "groundcite/pipeline.hpp"
#include "groundcite/synthesis.hpp"

namespace groundcite {

struct JobError {
    std::string code;  // error_code_name()
    std::string message;
    std::string field;

    friend bool operator==(const JobError&, const JobError&) = default;
};

struct Job {
    std::string job_id;
    Stage state = Stage::kQueued;
    std::string kind;  // "abstract" | "document" | "question"
    GenerationParams params;
    std::chrono::sys_seconds submitted_at{};
    std::chrono::sys_seconds updated_at{};
    std::string progress_note;
    std::optional<RelatedWorkResult> result;
    std::optional<JobError> error;

    friend bool operator==(const Job&, const Job&) = default;
};

void to_json(nlohmann::json& j, const Job& job);
void from_json(const nlohmann::json& j, Job& job);

/// "2026-01-02T03:04:05Z"
std::string format_timestamp(std::chrono::sys_seconds t);
std::chrono::sys_seconds parse_timestamp(const std::string& s);

/// Random (version 4) UUID in canonical lowercase form.
std::string make_uuid();
bool is_uuid(std::string_view s) noexcept;

/// Asynchronous job runner: a bounded queue served by a fixed number of
/// worker threads. Every state change is written to <dir>/<job_id>.json when
/// a directory is configured; jobs older than the TTL are forgotten.
class JobManager {
public:
    using Runner = std::function<RelatedWorkResult(const GenerationRequest&, const StageCallback&)>;
    using Clock = std::function<std::chrono::system_clock::time_point()>;

    struct Options {
        std::size_t workers = 2;
        std::size_t queue_capacity = 64;
        std::filesystem::path dir;  // empty: memory only
        std::chrono::hours ttl{24 * 7};
        Clock now = [] { return std::chrono::system_clock::now(); };
    };

    /// Loads persisted jobs; unfinished ones are marked failed.
    JobManager(Runner runner, Options opts);
    ~JobManager();
    JobManager(const JobManager&) = delete;
    JobManager& operator=(const JobManager&) = delete;

    /// Queues a request and returns its job id. Throws Error(kOverloaded)
    /// when the queue is full.
    std::string submit(GenerationRequest request);

    /// nullopt for unknown or expired ids.
    std::optional<Job> get(const std::string& job_id) const;

    /// Blocks until the job is done or failed, or the timeout passes.
    std::optional<Job> wait(const std::string& job_id, std::chrono::milliseconds timeout) const;

    /// Forgets (and deletes the files of) jobs whose last update is older
    /// than the TTL. Returns the number removed.
    std::size_t purge_expired();

    std::size_t queued() const;

    /// Stops accepting work and joins the workers; queued jobs stay queued
    /// on disk and are failed on the next start.
    void shutdown();

private:
    void worker_loop();
    void update(const std::string& job_id, const std::function<void(Job&)>& change);
    void persist(const Job& job) const;
    std::chrono::sys_seconds now_s() const;
    bool expired(const Job& job) const;

    Runner runner_;
    Options opts_;
    mutable std::mutex mu_;
    mutable std::condition_variable cv_;  // queue changes and job completion
    std::map<std::string, Job> jobs_;
    std::deque<std::pair<std::string, GenerationRequest>> queue_;
    bool stopping_ = false;
    std::vector<std::thread> threads_;
};

}  // namespace groundcite
