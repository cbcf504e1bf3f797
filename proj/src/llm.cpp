// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 groundcite contributors

#include "groundcite/llm.hpp"

#include <nlohmann/json.hpp>

#include "groundcite/error.hpp"
#include "text_util.hpp"

namespace groundcite {

LlmRequest make_request(const LlmConfig& cfg, std::string prompt) {
    return LlmRequest{cfg.model_id, std::move(prompt), cfg.temperature, cfg.max_tokens};
}

HttpLlmClient::HttpLlmClient(LlmConfig cfg, std::shared_ptr<HttpTransport> transport)
    : cfg_(std::move(cfg)), transport_(std::move(transport)) {
    if (cfg_.endpoint_url.empty()) throw validation_error("endpoint_url", "LLM endpoint is not configured");
}

std::string HttpLlmClient::complete(const LlmRequest& request) {
    const nlohmann::json body = {{"model", request.model},
                                 {"prompt", request.prompt},
                                 {"temperature", request.temperature},
                                 {"max_tokens", request.max_tokens}};
    HttpRequest req;
    req.method = "POST";
    req.url = cfg_.endpoint_url;
    req.body = body.dump();
    req.timeout = cfg_.timeout;

    std::string last_error;
    for (unsigned attempt = 0; attempt <= cfg_.retries; ++attempt) {
        HttpResponse res;
        try {
            res = transport_->send(req);
        } catch (const Error& e) {
            last_error = e.what();
            continue;
        }
        if (res.status >= 500 || res.status == 429) {
            last_error = "HTTP " + std::to_string(res.status);
            continue;
        }
        if (res.status < 200 || res.status >= 300) {
            throw Error(ErrorCode::kTransport, "LLM service returned HTTP " + std::to_string(res.status));
        }
        try {
            return nlohmann::json::parse(res.body).at("text").get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            last_error = std::string("malformed LLM response: ") + e.what();
        }
    }
    throw Error(ErrorCode::kTransport, "LLM request failed: " + last_error);
}

std::shared_ptr<ScriptedLlm> ScriptedLlm::constant(std::string reply) {
    return std::make_shared<ScriptedLlm>([reply = std::move(reply)](const LlmRequest&) { return reply; });
}

std::string ScriptedLlm::complete(const LlmRequest& request) {
    {
        std::lock_guard lock(mu_);
        requests_.push_back(request);
    }
    return script_(request);
}

std::vector<LlmRequest> ScriptedLlm::requests() const {
    std::lock_guard lock(mu_);
    return requests_;
}

std::size_t ScriptedLlm::call_count() const {
    std::lock_guard lock(mu_);
    return requests_.size();
}

double estimate_tokens(const std::string& text) { return static_cast<double>(detail::word_count(text)) * 1.5; }

}  // namespace groundcite
