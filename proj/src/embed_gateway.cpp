// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 groundcite contributors

#include "groundcite/embed_gateway.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <nlohmann/json.hpp>

#include "groundcite/error.hpp"
#include "text_util.hpp"

namespace groundcite {

std::string truncate_words(std::string_view text, std::size_t max_words) {
    std::size_t words = 0;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && detail::is_space(text[i])) ++i;
        if (i == text.size()) break;
        std::size_t j = i;
        while (j < text.size() && !detail::is_space(text[j])) ++j;
        if (++words == max_words) {
            // Anything after this point that is not whitespace means the
            // text was over the limit.
            std::size_t k = j;
            while (k < text.size() && detail::is_space(text[k])) ++k;
            if (k == text.size()) return std::string(text);
            return std::string(text.substr(0, j));
        }
        i = j;
    }
    return std::string(text);
}

Embedder::Embedder(EmbedderConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.dim == 0) throw validation_error("dim", "embedding dimension must be positive");
    if (cfg_.batch_size == 0) throw validation_error("batch_size", "batch_size must be at least 1");
    if (cfg_.max_input_tokens == 0) throw validation_error("max_input_tokens", "max_input_tokens must be positive");
}

std::vector<EmbeddingVector> Embedder::embed_texts(const std::vector<std::string>& texts) const {
    if (texts.empty()) throw validation_error("texts", "no texts to embed");
    std::vector<std::string> prepared;
    prepared.reserve(texts.size());
    for (std::size_t i = 0; i < texts.size(); ++i) {
        if (detail::trim(texts[i]).empty()) {
            throw validation_error("texts", "text at index " + std::to_string(i) + " is empty");
        }
        prepared.push_back(truncate_words(texts[i], cfg_.max_input_tokens));
    }

    std::vector<EmbeddingVector> out(prepared.size());
    std::vector<std::size_t> failed;
    std::string last_error;
    for (std::size_t begin = 0; begin < prepared.size(); begin += cfg_.batch_size) {
        const std::size_t end = std::min(prepared.size(), begin + cfg_.batch_size);
        std::span<const std::string> batch(prepared.data() + begin, end - begin);
        bool ok = false;
        for (unsigned attempt = 0; attempt <= cfg_.retries && !ok; ++attempt) {
            try {
                batches_submitted_.fetch_add(1);
                texts_submitted_.fetch_add(batch.size());
                auto raw = embed_batch(batch);
                if (raw.size() != batch.size()) {
                    throw Error(ErrorCode::kTransport, "embedding backend returned " + std::to_string(raw.size()) +
                                                           " vectors for " + std::to_string(batch.size()) + " inputs");
                }
                for (std::size_t i = 0; i < raw.size(); ++i) {
                    if (raw[i].size() != cfg_.dim) {
                        throw Error(ErrorCode::kTransport, "embedding backend returned dimension " +
                                                               std::to_string(raw[i].size()) + ", expected " +
                                                               std::to_string(cfg_.dim));
                    }
                    out[begin + i] = EmbeddingVector::normalized(std::move(raw[i]));
                }
                ok = true;
            } catch (const Error& e) {
                last_error = e.what();
                if (e.code() != ErrorCode::kTransport && e.code() != ErrorCode::kValidation) throw;
            }
        }
        if (!ok) {
            for (std::size_t i = begin; i < end; ++i) failed.push_back(i);
        }
    }
    if (!failed.empty()) {
        throw EmbeddingUnavailable("embedding failed for " + std::to_string(failed.size()) + " input(s): " + last_error,
                                   std::move(failed));
    }
    return out;
}

EmbeddingVector Embedder::embed_one(const std::string& text) const {
    return std::move(embed_texts(std::vector<std::string>{text}).front());
}

std::vector<double> MockEmbedder::raw_vector(std::string_view text, std::size_t dim) {
    std::mt19937_64 rng(detail::fnv1a64(text));
    // Box-Muller over raw 53-bit draws; avoids std::normal_distribution,
    // whose output is implementation-defined.
    auto unit = [&rng] { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; };
    std::vector<double> v(dim);
    for (std::size_t i = 0; i < dim; i += 2) {
        const double r = std::sqrt(-2.0 * std::log(unit()));
        const double theta = 2.0 * std::numbers::pi * unit();
        v[i] = r * std::cos(theta);
        if (i + 1 < dim) v[i + 1] = r * std::sin(theta);
    }
    return v;
}

std::vector<std::vector<double>> MockEmbedder::embed_batch(std::span<const std::string> texts) const {
    std::vector<std::vector<double>> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(raw_vector(t, dim()));
    return out;
}

HttpEmbedder::HttpEmbedder(EmbedderConfig cfg, std::shared_ptr<HttpTransport> transport)
    : Embedder(std::move(cfg)), transport_(std::move(transport)) {
    if (config().endpoint_url.empty()) throw validation_error("endpoint_url", "embedding endpoint is not configured");
}

std::vector<std::vector<double>> HttpEmbedder::embed_batch(std::span<const std::string> texts) const {
    nlohmann::json body = {{"model", config().model_id}, {"inputs", std::vector<std::string>(texts.begin(), texts.end())}};
    HttpRequest req;
    req.method = "POST";
    req.url = config().endpoint_url;
    req.body = body.dump();
    req.timeout = config().timeout;
    const HttpResponse res = transport_->send(req);
    if (res.status < 200 || res.status >= 300) {
        throw Error(ErrorCode::kTransport, "embedding service returned HTTP " + std::to_string(res.status));
    }
    try {
        const auto j = nlohmann::json::parse(res.body);
        return j.at("vectors").get<std::vector<std::vector<double>>>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::kTransport, std::string("malformed embedding response: ") + e.what());
    }
}

}  // namespace groundcite
