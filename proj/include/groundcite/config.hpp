// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 groundcite contributors

#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "groundcite/embed_gateway.hpp"
#include "groundcite/fulltext.hpp"
#include "groundcite/llm.hpp"
#include "groundcite/retrieval.hpp"

namespace groundcite {

struct DocumentConfig {
    std::string backend = "synthetic";  // "synthetic" | "arxiv"
    ArxivDocumentSource::Options arxiv;
    std::string cache_dir;              // empty: no page cache
    std::string extractor = "auto";     // "auto" | "pdftotext"
    std::size_t synthetic_pages = 8;
};

struct MetadataConfig {
    std::string backend = "none";  // "none" | "arxiv"
    std::string base_url = "http://export.arxiv.org/api/query";
    std::chrono::milliseconds timeout{15000};
};

struct PipelineConfig {
    RetrievalConfig retrieval;
    FullPaperConfig full_paper;
    FulltextConfig fulltext;
    std::size_t summary_parallelism = 4;
};

struct CorpusConfig {
    std::string store_path = "data/store.cgst";
    std::string index_path = "data/index.cghx";
    std::size_t sync_batch_size = 512;
};

struct ServiceConfig {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::size_t workers = 2;
    std::size_t queue_capacity = 64;
    std::string job_dir = "data/jobs";
    std::chrono::hours job_ttl{24 * 7};
    std::string admin_token;
    std::size_t max_upload_bytes = 30u * 1024 * 1024;
    std::string static_dir = "web/dist";
    std::size_t min_abstract_chars = 200;
    std::size_t max_abstract_chars = 20000;
};

struct AppConfig {
    std::string embedder_backend = "mock";  // "mock" | "http"
    EmbedderConfig embedder;
    std::string llm_backend = "mock";  // "mock" | "http"
    LlmConfig llm;
    DocumentConfig documents;
    MetadataConfig metadata;
    PipelineConfig pipeline;
    std::string prompt_dir;
    std::string prompt_version = "v1";
    CorpusConfig corpus;
    ServiceConfig service;
    std::size_t eval_parallelism = 4;
};

/// The JSON layout (sections "embedder", "llm", "documents", "metadata",
/// "retrieval", "prompts", "corpus", "service", "evaluation") with every
/// value filled in.
nlohmann::json config_to_json(const AppConfig& cfg);
/// Throws a validation error naming the first unknown or mistyped key.
AppConfig config_from_json(const nlohmann::json& j);

using EnvLookup = std::function<std::optional<std::string>(const std::string& name)>;
/// Reads the process environment.
std::optional<std::string> process_env(const std::string& name);

/// Defaults, overlaid by the JSON file (if given), overlaid by environment
/// variables GROUNDCITE_<SECTION>_<KEY> (e.g. GROUNDCITE_SERVICE_PORT).
AppConfig load_config(const std::optional<std::filesystem::path>& file, const EnvLookup& env = process_env);

}  // namespace groundcite
