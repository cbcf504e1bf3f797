// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 groundcite contributors

#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "groundcite/http_client.hpp"

namespace groundcite {

struct LlmConfig {
    std::string endpoint_url;
    std::string model_id = "gpt-4o";
    std::size_t max_context_tokens = 16000;
    double temperature = 0.0;
    int max_tokens = 1500;
    std::chrono::milliseconds timeout{120000};
    unsigned retries = 2;
};

struct LlmRequest {
    std::string model;
    std::string prompt;
    double temperature = 0.0;
    int max_tokens = 1500;
};

LlmRequest make_request(const LlmConfig& cfg, std::string prompt);

/// Text completion backend. Throws Error(kTransport) when no answer could be
/// obtained.
class LlmClient {
public:
    virtual ~LlmClient() = default;
    virtual std::string complete(const LlmRequest& request) = 0;
};

/// POSTs {"model", "prompt", "temperature", "max_tokens"} and reads
/// {"text"} from the response, retrying transport failures and 5xx
/// responses up to cfg.retries times.
class HttpLlmClient final : public LlmClient {
public:
    explicit HttpLlmClient(LlmConfig cfg, std::shared_ptr<HttpTransport> transport = make_default_transport());
    std::string complete(const LlmRequest& request) override;

private:
    LlmConfig cfg_;
    std::shared_ptr<HttpTransport> transport_;
};

/// Test double: answers through a callback and records every request.
class ScriptedLlm final : public LlmClient {
public:
    using Script = std::function<std::string(const LlmRequest&)>;

    explicit ScriptedLlm(Script script) : script_(std::move(script)) {}
    /// Always answers `reply`.
    static std::shared_ptr<ScriptedLlm> constant(std::string reply);

    std::string complete(const LlmRequest& request) override;

    std::vector<LlmRequest> requests() const;
    std::size_t call_count() const;

private:
    Script script_;
    mutable std::mutex mu_;
    std::vector<LlmRequest> requests_;
};

/// Prompt size estimate used for context budgeting: words * 1.5.
double estimate_tokens(const std::string& text);

}  // namespace groundcite
