// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 groundcite contributors

#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "groundcite/config.hpp"
#include "groundcite/corpus_store.hpp"
#include "groundcite/embed_gateway.hpp"
#include "groundcite/fulltext.hpp"
#include "groundcite/llm.hpp"
#include "groundcite/prompts.hpp"
#include "groundcite/synthesis.hpp"

namespace groundcite {

/// Job/pipeline progress, in the only order it may advance.
enum class Stage { kQueued, kRetrieving, kFiltering, kSummarizing, kSynthesizing, kDone, kFailed };
const char* stage_name(Stage s) noexcept;
Stage parse_stage(const std::string& name);
/// True when `to` may follow `from` (strictly later; done/failed are final).
bool is_forward_transition(Stage from, Stage to) noexcept;

enum class InputKind { kAbstract, kDocument };

struct GenerationRequest {
    InputKind input = InputKind::kAbstract;
    std::string abstract;                     // query text (abstract mode) or optional context
    std::vector<std::string> document_pages;  // extracted pages (document mode)
    std::string question;                     // non-empty selects question answering
    GenerationParams params;
};

struct PipelineBackends {
    std::shared_ptr<CorpusStore> store;
    std::shared_ptr<Embedder> embedder;
    std::shared_ptr<LlmClient> llm;
    std::shared_ptr<DocumentFetcher> fetcher;
    std::shared_ptr<MetadataSource> metadata;  // may be null
    PromptTemplates templates = PromptTemplates::builtin();
};

/// Builds backends from configuration ("mock"/"synthetic" backends need no
/// network).
PipelineBackends make_backends(const AppConfig& cfg, std::shared_ptr<CorpusStore> store);

using StageCallback = std::function<void(Stage stage, const std::string& note)>;

/// retrieve -> fetch/filter pages -> shortlist -> summarize -> synthesize ->
/// ground citations.
class Pipeline {
public:
    Pipeline(PipelineBackends backends, PipelineConfig cfg, LlmConfig llm_cfg);

    /// Throws groundcite::Error on failure; on_stage is called on entry to
    /// each stage.
    RelatedWorkResult run(const GenerationRequest& request, const StageCallback& on_stage = {}) const;

    const PipelineBackends& backends() const noexcept { return b_; }

private:
    PipelineBackends b_;
    PipelineConfig cfg_;
    LlmConfig llm_cfg_;
};

}  // namespace groundcite
