// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 groundcite contributors

#include "groundcite/pipeline.hpp"

#include "groundcite/error.hpp"
#include "groundcite/hermetic.hpp"
#include "groundcite/text_clean.hpp"
#include "text_util.hpp"

namespace groundcite {

namespace {
constexpr const char* kStageNames[] = {"queued",       "retrieving", "filtering", "summarizing",
                                       "synthesizing", "done",       "failed"};
// Words of the input paper used as context in document mode.
constexpr std::size_t kDocumentContextWords = 384;
}  // namespace

const char* stage_name(Stage s) noexcept { return kStageNames[static_cast<int>(s)]; }

Stage parse_stage(const std::string& name) {
    for (int i = 0; i < static_cast<int>(std::size(kStageNames)); ++i) {
        if (name == kStageNames[i]) return static_cast<Stage>(i);
    }
    throw Error(ErrorCode::kParse, "unknown job state " + name);
}

bool is_forward_transition(Stage from, Stage to) noexcept {
    if (from == Stage::kDone || from == Stage::kFailed) return false;
    if (to == Stage::kFailed) return true;
    return static_cast<int>(to) > static_cast<int>(from);
}

PipelineBackends make_backends(const AppConfig& cfg, std::shared_ptr<CorpusStore> store) {
    PipelineBackends b;
    b.store = store;
    if (cfg.embedder_backend == "http") {
        b.embedder = std::make_shared<HttpEmbedder>(cfg.embedder);
    } else {
        b.embedder = std::make_shared<MockEmbedder>(cfg.embedder);
    }
    if (cfg.llm_backend == "http") {
        b.llm = std::make_shared<HttpLlmClient>(cfg.llm);
    } else {
        b.llm = std::make_shared<HermeticLlm>();
    }

    std::shared_ptr<DocumentSource> source;
    std::shared_ptr<TextExtractor> extractor;
    if (cfg.documents.backend == "arxiv") {
        source = std::make_shared<ArxivDocumentSource>(cfg.documents.arxiv);
        if (cfg.documents.extractor == "pdftotext") {
            extractor = std::make_shared<CommandTextExtractor>();
        } else {
            extractor = std::make_shared<AutoExtractor>();
        }
    } else {
        source = std::make_shared<SyntheticDocumentSource>(store, cfg.documents.synthetic_pages);
        extractor = std::make_shared<PlainTextExtractor>();
    }
    std::optional<PageCache> cache;
    if (!cfg.documents.cache_dir.empty()) cache.emplace(cfg.documents.cache_dir);
    b.fetcher = std::make_shared<DocumentFetcher>(source, extractor, cache);

    if (cfg.metadata.backend == "arxiv") {
        b.metadata = std::make_shared<ArxivMetadataSource>(cfg.metadata.base_url, make_default_transport(),
                                                           cfg.metadata.timeout);
    }
    b.templates = cfg.prompt_dir.empty() ? PromptTemplates::builtin()
                                         : PromptTemplates::load_dir(cfg.prompt_dir, cfg.prompt_version);
    return b;
}

Pipeline::Pipeline(PipelineBackends backends, PipelineConfig cfg, LlmConfig llm_cfg)
    : b_(std::move(backends)), cfg_(std::move(cfg)), llm_cfg_(std::move(llm_cfg)) {
    if (!b_.store || !b_.embedder || !b_.llm || !b_.fetcher) {
        throw std::invalid_argument("pipeline backends are incomplete");
    }
}

RelatedWorkResult Pipeline::run(const GenerationRequest& req, const StageCallback& on_stage) const {
    auto stage = [&](Stage s, const std::string& note) {
        if (on_stage) on_stage(s, note);
    };
    validate_params(req.params);
    const bool qa = !detail::trim(req.question).empty();
    const auto mode = qa ? SynthesisMode::kQuestionAnswer : SynthesisMode::kRelatedWork;
    std::vector<std::string> warnings;

    stage(Stage::kRetrieving, "searching the corpus");
    std::string context = req.abstract;
    SelectionResult longlist;
    std::optional<EmbeddingVector> query;
    if (req.input == InputKind::kDocument) {
        longlist = match_full_paper(req.document_pages, req.params, *b_.store, *b_.embedder, cfg_.full_paper,
                                    b_.fetcher->rules());
        if (detail::trim(context).empty()) {
            const auto pages = clean_document(req.document_pages, b_.fetcher->rules());
            context = truncate_words(pages.front().text, kDocumentContextWords);
        }
    } else {
        if (detail::trim(context).empty()) throw validation_error("abstract", "abstract must not be empty");
        query = b_.embedder->embed_one(context);
        longlist = build_longlist(*query, req.params, *b_.store, cfg_.retrieval);
    }
    if (longlist.underfilled) {
        warnings.push_back("longlist holds " + std::to_string(longlist.selected.size()) + " papers, fewer than breadth " +
                           std::to_string(req.params.breadth));
    }

    stage(Stage::kFiltering, "fetching " + std::to_string(longlist.selected.size()) + " full texts");
    if (!query) query = b_.embedder->embed_one(context);
    const auto gathered = gather_pages(longlist, *query, req.params, *b_.store, *b_.fetcher, *b_.embedder,
                                       cfg_.fulltext.parallelism);
    std::vector<ShortlistEntry> survivors;
    for (const auto& g : gathered) {
        if (g.entry) {
            survivors.push_back(*g.entry);
        } else {
            warnings.push_back(g.warning);
        }
    }
    const auto shortlist = build_shortlist(std::move(survivors), cfg_.fulltext.shortlist);

    stage(Stage::kSummarizing, "summarizing " + std::to_string(shortlist.size()) + " papers");
    const auto summaries =
        summarize_all(context, shortlist, *b_.llm, llm_cfg_, cfg_.summary_parallelism, warnings, b_.templates);
    if (summaries.empty()) throw Error(ErrorCode::kNoUsableSources, "no shortlisted paper could be summarized");

    stage(Stage::kSynthesizing, "writing the section");
    const std::string draft =
        synthesize(context, summaries, *b_.llm, llm_cfg_, mode, req.question, b_.templates, &warnings);

    std::vector<std::string> citable;
    for (const auto& s : summaries) citable.push_back(s.arxiv_id);
    std::vector<std::string> lookup_warnings;
    RelatedWorkResult result = finalize(draft, citable, [&](const std::string& id) {
        return fetch_citation_metadata(id, b_.metadata.get(), b_.store.get(), lookup_warnings);
    });
    result.params_used = req.params;
    result.shortlist_ids.clear();
    for (const auto& e : shortlist) result.shortlist_ids.push_back(e.arxiv_id);
    warnings.insert(warnings.end(), result.warnings.begin(), result.warnings.end());
    warnings.insert(warnings.end(), lookup_warnings.begin(), lookup_warnings.end());
    result.warnings = std::move(warnings);
    if (auto bad = check_result_invariants(result)) throw Error(ErrorCode::kSynthesis, "invalid result: " + *bad);
    return result;
}

}  // namespace groundcite
