// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 groundcite contributors

#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "groundcite/embedding.hpp"
#include "groundcite/http_client.hpp"

namespace groundcite {

struct EmbedderConfig {
    std::string endpoint_url;
    std::string model_id = "all-mpnet-base-v2";
    std::size_t dim = 768;
    std::size_t max_input_tokens = 384;  // whitespace-delimited words
    std::size_t batch_size = 32;
    std::chrono::milliseconds timeout{30000};
    unsigned retries = 2;
};

/// Cuts `text` after its `max_words`-th whitespace-delimited word. Text
/// already within the limit is returned unchanged.
std::string truncate_words(std::string_view text, std::size_t max_words);

/// Batching, truncating, retrying front end over an embedding backend.
///
/// embed_texts() validates inputs, truncates each text to
/// max_input_tokens words, submits batches of batch_size to embed_batch()
/// and returns one unit vector per input in input order. Thread-safe if the
/// backend's embed_batch() is.
class Embedder {
public:
    explicit Embedder(EmbedderConfig cfg);
    virtual ~Embedder() = default;

    const EmbedderConfig& config() const noexcept { return cfg_; }
    std::size_t dim() const noexcept { return cfg_.dim; }

    std::vector<EmbeddingVector> embed_texts(const std::vector<std::string>& texts) const;
    EmbeddingVector embed_one(const std::string& text) const;

    /// Number of texts handed to the backend so far (after batching).
    std::size_t texts_submitted() const noexcept { return texts_submitted_.load(); }
    std::size_t batches_submitted() const noexcept { return batches_submitted_.load(); }

protected:
    /// Embeds one batch of already-truncated texts. Must return exactly
    /// texts.size() raw vectors of length dim(); may throw
    /// Error(kTransport) to request a retry.
    virtual std::vector<std::vector<double>> embed_batch(std::span<const std::string> texts) const = 0;

private:
    EmbedderConfig cfg_;
    mutable std::atomic<std::size_t> texts_submitted_{0};
    mutable std::atomic<std::size_t> batches_submitted_{0};
};

/// Deterministic test embedder: a PRNG seeded with a stable 64-bit hash of
/// the text draws dim Gaussian components, which are then normalized.
class MockEmbedder final : public Embedder {
public:
    explicit MockEmbedder(EmbedderConfig cfg = {}) : Embedder(std::move(cfg)) {}

    /// The raw (pre-normalization) draw for `text`; exposed for oracles.
    static std::vector<double> raw_vector(std::string_view text, std::size_t dim);

protected:
    std::vector<std::vector<double>> embed_batch(std::span<const std::string> texts) const override;
};

/// Client for a remote embedding service.
/// Request: {"model": <model_id>, "inputs": [text...]}
/// Response: {"vectors": [[float...]...]}
class HttpEmbedder final : public Embedder {
public:
    HttpEmbedder(EmbedderConfig cfg, std::shared_ptr<HttpTransport> transport = make_default_transport());

protected:
    std::vector<std::vector<double>> embed_batch(std::span<const std::string> texts) const override;

private:
    std::shared_ptr<HttpTransport> transport_;
};

}  // namespace groundcite
