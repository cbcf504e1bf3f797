// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 groundcite contributors

#include "groundcite/jobs.hpp"

#include <cstdio>
#include <random>

#include <nlohmann/json.hpp>

#include "binary_io.hpp"

namespace groundcite {

std::string format_timestamp(std::chrono::sys_seconds t) {
    using namespace std::chrono;
    const auto day = floor<days>(t);
    const year_month_day ymd{day};
    const hh_mm_ss hms{t - day};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                  static_cast<int>(hms.seconds().count()));
    return buf;
}

std::chrono::sys_seconds parse_timestamp(const std::string& s) {
    using namespace std::chrono;
    int y = 0, h = 0, mi = 0, sec = 0;
    unsigned mo = 0, d = 0;
    if (std::sscanf(s.c_str(), "%4d-%2u-%2uT%2d:%2d:%2dZ", &y, &mo, &d, &h, &mi, &sec) != 6) {
        throw Error(ErrorCode::kParse, "malformed timestamp " + s);
    }
    const year_month_day ymd{year{y}, month{mo}, day{d}};
    if (!ymd.ok()) throw Error(ErrorCode::kParse, "malformed timestamp " + s);
    return sys_days{ymd} + hours{h} + minutes{mi} + seconds{sec};
}

std::string make_uuid() {
    thread_local std::mt19937_64 rng{[] {
        std::random_device rd;
        std::seed_seq seq{rd(), rd(), rd(), rd()};
        return std::mt19937_64(seq);
    }()};
    unsigned char b[16];
    for (int i = 0; i < 16; i += 8) {
        const auto v = rng();
        for (int k = 0; k < 8; ++k) b[i + k] = static_cast<unsigned char>(v >> (8 * k));
    }
    b[6] = static_cast<unsigned char>((b[6] & 0x0F) | 0x40);
    b[8] = static_cast<unsigned char>((b[8] & 0x3F) | 0x80);
    char out[37];
    std::snprintf(out, sizeof out, "%02x%02x%02x%02x-%02x%02x-%02x%02x-%02x%02x-%02x%02x%02x%02x%02x%02x", b[0], b[1],
                  b[2], b[3], b[4], b[5], b[6], b[7], b[8], b[9], b[10], b[11], b[12], b[13], b[14], b[15]);
    return out;
}

bool is_uuid(std::string_view s) noexcept {
    if (s.size() != 36) return false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const char c = s[i];
        if (i == 8 || i == 13 || i == 18 || i == 23) {
            if (c != '-') return false;
        } else if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) {
            return false;
        }
    }
    return true;
}

void to_json(nlohmann::json& j, const Job& job) {
    j = {{"job_id", job.job_id},
         {"state", stage_name(job.state)},
         {"kind", job.kind},
         {"params", job.params},
         {"submitted_at", format_timestamp(job.submitted_at)},
         {"updated_at", format_timestamp(job.updated_at)},
         {"progress_note", job.progress_note}};
    if (job.result) j["result"] = *job.result;
    if (job.error) {
        nlohmann::json e = {{"code", job.error->code}, {"message", job.error->message}};
        if (!job.error->field.empty()) e["field"] = job.error->field;
        j["error"] = e;
    }
}

void from_json(const nlohmann::json& j, Job& job) {
    job.job_id = j.at("job_id").get<std::string>();
    job.state = parse_stage(j.at("state").get<std::string>());
    job.kind = j.value("kind", std::string());
    job.params = j.at("params").get<GenerationParams>();
    job.submitted_at = parse_timestamp(j.at("submitted_at").get<std::string>());
    job.updated_at = parse_timestamp(j.at("updated_at").get<std::string>());
    job.progress_note = j.value("progress_note", std::string());
    job.result.reset();
    if (j.contains("result")) job.result = j.at("result").get<RelatedWorkResult>();
    job.error.reset();
    if (j.contains("error")) {
        const auto& e = j.at("error");
        job.error = JobError{e.at("code").get<std::string>(), e.at("message").get<std::string>(),
                             e.value("field", std::string())};
    }
}

JobManager::JobManager(Runner runner, Options opts) : runner_(std::move(runner)), opts_(std::move(opts)) {
    if (opts_.workers == 0) throw validation_error("workers", "at least one worker is required");
    if (!opts_.dir.empty()) {
        std::filesystem::create_directories(opts_.dir);
        for (const auto& e : std::filesystem::directory_iterator(opts_.dir)) {
            if (e.path().extension() != ".json" || !is_uuid(e.path().stem().string())) continue;
            Job job;
            try {
                job = nlohmann::json::parse(detail::read_file(e.path())).get<Job>();
            } catch (const std::exception&) {
                continue;  // unreadable leftovers are ignored
            }
            if (expired(job)) {
                std::error_code ec;
                std::filesystem::remove(e.path(), ec);
                continue;
            }
            if (job.state != Stage::kDone && job.state != Stage::kFailed) {
                job.state = Stage::kFailed;
                job.error = JobError{"interrupted", "interrupted by a service restart", ""};
                job.updated_at = now_s();
                persist(job);
            }
            jobs_.emplace(job.job_id, std::move(job));
        }
    }
    for (std::size_t i = 0; i < opts_.workers; ++i) threads_.emplace_back([this] { worker_loop(); });
}

JobManager::~JobManager() { shutdown(); }

void JobManager::shutdown() {
    {
        std::lock_guard lock(mu_);
        if (stopping_ && threads_.empty()) return;
        stopping_ = true;
    }
    cv_.notify_all();
    for (auto& t : threads_) {
        if (t.joinable()) t.join();
    }
    threads_.clear();
}

std::chrono::sys_seconds JobManager::now_s() const {
    return std::chrono::floor<std::chrono::seconds>(opts_.now());
}

bool JobManager::expired(const Job& job) const { return now_s() - job.updated_at > opts_.ttl; }

std::string JobManager::submit(GenerationRequest request) {
    Job job;
    job.job_id = make_uuid();
    job.kind = !request.question.empty()                ? "question"
               : request.input == InputKind::kDocument ? "document"
                                                        : "abstract";
    job.params = request.params;
    job.submitted_at = job.updated_at = now_s();
    job.progress_note = "waiting for a worker";
    {
        std::lock_guard lock(mu_);
        if (stopping_) throw Error(ErrorCode::kOverloaded, "the service is shutting down");
        if (queue_.size() >= opts_.queue_capacity) {
            throw Error(ErrorCode::kOverloaded, "the job queue is full; retry later");
        }
        persist(job);
        jobs_.emplace(job.job_id, job);
        queue_.emplace_back(job.job_id, std::move(request));
    }
    cv_.notify_all();
    return job.job_id;
}

std::optional<Job> JobManager::get(const std::string& job_id) const {
    std::lock_guard lock(mu_);
    auto it = jobs_.find(job_id);
    if (it == jobs_.end() || expired(it->second)) return std::nullopt;
    return it->second;
}

std::optional<Job> JobManager::wait(const std::string& job_id, std::chrono::milliseconds timeout) const {
    std::unique_lock lock(mu_);
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    for (;;) {
        auto it = jobs_.find(job_id);
        if (it == jobs_.end()) return std::nullopt;
        if (it->second.state == Stage::kDone || it->second.state == Stage::kFailed) return it->second;
        if (cv_.wait_until(lock, deadline) == std::cv_status::timeout) return jobs_.at(job_id);
    }
}

std::size_t JobManager::purge_expired() {
    std::lock_guard lock(mu_);
    std::size_t removed = 0;
    for (auto it = jobs_.begin(); it != jobs_.end();) {
        const bool finished = it->second.state == Stage::kDone || it->second.state == Stage::kFailed;
        if (finished && expired(it->second)) {
            if (!opts_.dir.empty()) {
                std::error_code ec;
                std::filesystem::remove(opts_.dir / (it->first + ".json"), ec);
            }
            it = jobs_.erase(it);
            ++removed;
        } else {
            ++it;
        }
    }
    return removed;
}

std::size_t JobManager::queued() const {
    std::lock_guard lock(mu_);
    return queue_.size();
}

void JobManager::persist(const Job& job) const {
    if (opts_.dir.empty()) return;
    detail::write_file_atomic(opts_.dir / (job.job_id + ".json"), nlohmann::json(job).dump());
}

void JobManager::update(const std::string& job_id, const std::function<void(Job&)>& change) {
    {
        std::lock_guard lock(mu_);
        Job& job = jobs_.at(job_id);
        change(job);
        job.updated_at = now_s();
        persist(job);
    }
    cv_.notify_all();
}

void JobManager::worker_loop() {
    for (;;) {
        std::pair<std::string, GenerationRequest> item;
        {
            std::unique_lock lock(mu_);
            cv_.wait(lock, [&] { return stopping_ || !queue_.empty(); });
            if (stopping_) return;
            item = std::move(queue_.front());
            queue_.pop_front();
        }
        const std::string& id = item.first;
        auto advance = [&](Stage s, const std::string& note) {
            update(id, [&](Job& job) {
                if (is_forward_transition(job.state, s)) job.state = s;
                job.progress_note = note;
            });
        };
        try {
            auto result = runner_(item.second, advance);
            update(id, [&](Job& job) {
                job.state = Stage::kDone;
                job.progress_note = "finished";
                job.result = std::move(result);
            });
        } catch (const Error& e) {
            update(id, [&](Job& job) {
                job.state = Stage::kFailed;
                job.progress_note = "failed";
                job.error = JobError{error_code_name(e.code()), e.what(), e.field()};
            });
        } catch (const std::exception& e) {
            update(id, [&](Job& job) {
                job.state = Stage::kFailed;
                job.progress_note = "failed";
                job.error = JobError{"internal_error", e.what(), ""};
            });
        }
    }
}

}  // namespace groundcite
