// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 groundcite contributors

#include "groundcite/config.hpp"

#include <cstdlib>
#include <fstream>

#include "groundcite/error.hpp"
#include "text_util.hpp"

namespace groundcite {

namespace {

using nlohmann::json;

long long ms(std::chrono::milliseconds d) { return d.count(); }

}  // namespace

json config_to_json(const AppConfig& c) {
    const auto& r = c.pipeline.retrieval;
    return {
        {"embedder",
         {{"backend", c.embedder_backend},
          {"endpoint_url", c.embedder.endpoint_url},
          {"model_id", c.embedder.model_id},
          {"dim", c.embedder.dim},
          {"max_input_tokens", c.embedder.max_input_tokens},
          {"batch_size", c.embedder.batch_size},
          {"timeout_ms", ms(c.embedder.timeout)},
          {"retries", c.embedder.retries}}},
        {"llm",
         {{"backend", c.llm_backend},
          {"endpoint_url", c.llm.endpoint_url},
          {"model_id", c.llm.model_id},
          {"max_context_tokens", c.llm.max_context_tokens},
          {"temperature", c.llm.temperature},
          {"max_tokens", c.llm.max_tokens},
          {"timeout_ms", ms(c.llm.timeout)},
          {"retries", c.llm.retries}}},
        {"documents",
         {{"backend", c.documents.backend},
          {"base_url", c.documents.arxiv.base_url},
          {"politeness_delay_ms", ms(c.documents.arxiv.politeness_delay)},
          {"timeout_ms", ms(c.documents.arxiv.timeout)},
          {"retries", c.documents.arxiv.retries},
          {"cache_dir", c.documents.cache_dir},
          {"extractor", c.documents.extractor},
          {"synthetic_pages", c.documents.synthetic_pages}}},
        {"metadata",
         {{"backend", c.metadata.backend},
          {"base_url", c.metadata.base_url},
          {"timeout_ms", ms(c.metadata.timeout)}}},
        {"retrieval",
         {{"pool_factor", r.pool_factor},
          {"exclude_query_duplicate", r.exclude_query_duplicate},
          {"duplicate_threshold", r.duplicate_threshold},
          {"page_aggregation", aggregation_name(c.pipeline.full_paper.aggregation)},
          {"fetch_parallelism", c.pipeline.fulltext.parallelism},
          {"summary_parallelism", c.pipeline.summary_parallelism},
          {"shortlist_keep_ratio", c.pipeline.fulltext.shortlist.keep_ratio},
          {"shortlist_cap", c.pipeline.fulltext.shortlist.cap}}},
        {"prompts", {{"dir", c.prompt_dir}, {"version", c.prompt_version}}},
        {"corpus",
         {{"store_path", c.corpus.store_path},
          {"index_path", c.corpus.index_path},
          {"sync_batch_size", c.corpus.sync_batch_size}}},
        {"service",
         {{"host", c.service.host},
          {"port", c.service.port},
          {"workers", c.service.workers},
          {"queue_capacity", c.service.queue_capacity},
          {"job_dir", c.service.job_dir},
          {"job_ttl_hours", c.service.job_ttl.count()},
          {"admin_token", c.service.admin_token},
          {"max_upload_bytes", c.service.max_upload_bytes},
          {"static_dir", c.service.static_dir},
          {"min_abstract_chars", c.service.min_abstract_chars},
          {"max_abstract_chars", c.service.max_abstract_chars}}},
        {"evaluation", {{"parallelism", c.eval_parallelism}}},
    };
}

namespace {

// Reads section.key, converting with json's own type checks.
class Reader {
public:
    explicit Reader(const json& j) : j_(j) {}

    template <typename T>
    void get(const char* section, const char* key, T& out) const {
        try {
            out = j_.at(section).at(key).get<T>();
        } catch (const json::exception&) {
            throw validation_error(std::string(section) + "." + key, "invalid value for " + std::string(section) +
                                                                         "." + key);
        }
    }
    void get_ms(const char* section, const char* key, std::chrono::milliseconds& out) const {
        long long v = 0;
        get(section, key, v);
        if (v < 0) throw validation_error(std::string(section) + "." + key, "must not be negative");
        out = std::chrono::milliseconds{v};
    }

private:
    const json& j_;
};

void check_positive(std::size_t v, const char* field) {
    if (v == 0) throw validation_error(field, std::string(field) + " must be at least 1");
}

void check_backend(const std::string& v, std::initializer_list<const char*> allowed, const char* field) {
    for (const char* a : allowed) {
        if (v == a) return;
    }
    throw validation_error(field, "unsupported " + std::string(field) + " '" + v + "'");
}

}  // namespace

AppConfig config_from_json(const json& j) {
    // Reject unknown sections/keys against the default layout.
    const json layout = config_to_json(AppConfig{});
    if (!j.is_object()) throw validation_error("config", "configuration must be a JSON object");
    for (const auto& [section, body] : j.items()) {
        if (!layout.contains(section)) throw validation_error(section, "unknown configuration section " + section);
        if (!body.is_object()) throw validation_error(section, "section " + section + " must be an object");
        for (const auto& [key, _] : body.items()) {
            if (!layout[section].contains(key)) {
                throw validation_error(section + "." + key, "unknown configuration key " + section + "." + key);
            }
        }
    }
    json full = layout;
    full.merge_patch(j);

    AppConfig c;
    const Reader r(full);
    r.get("embedder", "backend", c.embedder_backend);
    r.get("embedder", "endpoint_url", c.embedder.endpoint_url);
    r.get("embedder", "model_id", c.embedder.model_id);
    r.get("embedder", "dim", c.embedder.dim);
    r.get("embedder", "max_input_tokens", c.embedder.max_input_tokens);
    r.get("embedder", "batch_size", c.embedder.batch_size);
    r.get_ms("embedder", "timeout_ms", c.embedder.timeout);
    r.get("embedder", "retries", c.embedder.retries);

    r.get("llm", "backend", c.llm_backend);
    r.get("llm", "endpoint_url", c.llm.endpoint_url);
    r.get("llm", "model_id", c.llm.model_id);
    r.get("llm", "max_context_tokens", c.llm.max_context_tokens);
    r.get("llm", "temperature", c.llm.temperature);
    r.get("llm", "max_tokens", c.llm.max_tokens);
    r.get_ms("llm", "timeout_ms", c.llm.timeout);
    r.get("llm", "retries", c.llm.retries);

    r.get("documents", "backend", c.documents.backend);
    r.get("documents", "base_url", c.documents.arxiv.base_url);
    r.get_ms("documents", "politeness_delay_ms", c.documents.arxiv.politeness_delay);
    r.get_ms("documents", "timeout_ms", c.documents.arxiv.timeout);
    r.get("documents", "retries", c.documents.arxiv.retries);
    r.get("documents", "cache_dir", c.documents.cache_dir);
    r.get("documents", "extractor", c.documents.extractor);
    r.get("documents", "synthetic_pages", c.documents.synthetic_pages);

    r.get("metadata", "backend", c.metadata.backend);
    r.get("metadata", "base_url", c.metadata.base_url);
    r.get_ms("metadata", "timeout_ms", c.metadata.timeout);

    auto& rc = c.pipeline.retrieval;
    r.get("retrieval", "pool_factor", rc.pool_factor);
    r.get("retrieval", "exclude_query_duplicate", rc.exclude_query_duplicate);
    r.get("retrieval", "duplicate_threshold", rc.duplicate_threshold);
    std::string aggregation;
    r.get("retrieval", "page_aggregation", aggregation);
    c.pipeline.full_paper.aggregation = parse_aggregation(aggregation);
    c.pipeline.full_paper.pool_factor = rc.pool_factor;
    r.get("retrieval", "fetch_parallelism", c.pipeline.fulltext.parallelism);
    r.get("retrieval", "summary_parallelism", c.pipeline.summary_parallelism);
    r.get("retrieval", "shortlist_keep_ratio", c.pipeline.fulltext.shortlist.keep_ratio);
    r.get("retrieval", "shortlist_cap", c.pipeline.fulltext.shortlist.cap);

    r.get("prompts", "dir", c.prompt_dir);
    r.get("prompts", "version", c.prompt_version);

    r.get("corpus", "store_path", c.corpus.store_path);
    r.get("corpus", "index_path", c.corpus.index_path);
    r.get("corpus", "sync_batch_size", c.corpus.sync_batch_size);

    r.get("service", "host", c.service.host);
    r.get("service", "port", c.service.port);
    r.get("service", "workers", c.service.workers);
    r.get("service", "queue_capacity", c.service.queue_capacity);
    r.get("service", "job_dir", c.service.job_dir);
    long long ttl = 0;
    r.get("service", "job_ttl_hours", ttl);
    if (ttl <= 0) throw validation_error("service.job_ttl_hours", "must be positive");
    c.service.job_ttl = std::chrono::hours{ttl};
    r.get("service", "admin_token", c.service.admin_token);
    r.get("service", "max_upload_bytes", c.service.max_upload_bytes);
    r.get("service", "static_dir", c.service.static_dir);
    r.get("service", "min_abstract_chars", c.service.min_abstract_chars);
    r.get("service", "max_abstract_chars", c.service.max_abstract_chars);

    r.get("evaluation", "parallelism", c.eval_parallelism);

    check_backend(c.embedder_backend, {"mock", "http"}, "embedder.backend");
    check_backend(c.llm_backend, {"mock", "http"}, "llm.backend");
    check_backend(c.documents.backend, {"synthetic", "arxiv"}, "documents.backend");
    check_backend(c.documents.extractor, {"auto", "pdftotext"}, "documents.extractor");
    check_backend(c.metadata.backend, {"none", "arxiv"}, "metadata.backend");
    check_positive(c.embedder.dim, "embedder.dim");
    check_positive(c.embedder.batch_size, "embedder.batch_size");
    check_positive(rc.pool_factor, "retrieval.pool_factor");
    check_positive(c.pipeline.fulltext.parallelism, "retrieval.fetch_parallelism");
    check_positive(c.pipeline.summary_parallelism, "retrieval.summary_parallelism");
    check_positive(c.pipeline.fulltext.shortlist.cap, "retrieval.shortlist_cap");
    check_positive(c.corpus.sync_batch_size, "corpus.sync_batch_size");
    check_positive(c.service.workers, "service.workers");
    check_positive(c.service.queue_capacity, "service.queue_capacity");
    if (!(c.pipeline.fulltext.shortlist.keep_ratio > 0.0 && c.pipeline.fulltext.shortlist.keep_ratio <= 1.0)) {
        throw validation_error("retrieval.shortlist_keep_ratio", "must be in (0, 1]");
    }
    if (c.service.port < 0 || c.service.port > 65535) throw validation_error("service.port", "must be in [0, 65535]");
    return c;
}

std::optional<std::string> process_env(const std::string& name) {
    if (const char* v = std::getenv(name.c_str())) return std::string(v);
    return std::nullopt;
}

AppConfig load_config(const std::optional<std::filesystem::path>& file, const EnvLookup& env) {
    json merged = json::object();
    if (file) {
        std::ifstream in(*file);
        if (!in) throw Error(ErrorCode::kIo, "cannot open config file " + file->string());
        try {
            merged = json::parse(in);
        } catch (const json::parse_error& e) {
            throw Error(ErrorCode::kParse, "config file " + file->string() + ": " + e.what());
        }
        config_from_json(merged);  // unknown keys are reported against the file
    }

    json layout = config_to_json(AppConfig{});
    for (auto& [section, body] : layout.items()) {
        for (auto& [key, def] : body.items()) {
            const std::string name = "GROUNDCITE_" + detail::to_upper(section) + "_" + detail::to_upper(key);
            const auto value = env(name);
            if (!value) continue;
            json parsed;
            if (def.is_string()) {
                parsed = *value;
            } else {
                try {
                    parsed = json::parse(*value);
                } catch (const json::parse_error&) {
                    throw validation_error(section + "." + key, "environment variable " + name + " is not valid");
                }
            }
            merged[section][key] = parsed;
        }
    }
    return config_from_json(merged);
}

}  // namespace groundcite
