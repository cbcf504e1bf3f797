// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 groundcite contributors

#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "groundcite/corpus_store.hpp"
#include "groundcite/fulltext.hpp"
#include "groundcite/http_client.hpp"
#include "groundcite/llm.hpp"
#include "groundcite/prompts.hpp"
#include "groundcite/retrieval.hpp"

namespace groundcite {

struct PaperSummary {
    std::string arxiv_id;
    std::string summary_text;
    std::vector<std::size_t> source_pages_used;

    friend bool operator==(const PaperSummary&, const PaperSummary&) = default;
};

struct Citation {
    std::string key;  // "[1]", "[2]", ...
    std::string arxiv_id;
    std::string title;
    std::vector<std::string> authors;
    int year = 0;
    std::string url;

    friend bool operator==(const Citation&, const Citation&) = default;
};

enum class SynthesisMode { kRelatedWork, kQuestionAnswer };

struct RelatedWorkResult {
    std::string body;
    std::vector<Citation> citations;
    GenerationParams params_used;
    std::vector<std::string> shortlist_ids;
    std::vector<std::string> warnings;

    friend bool operator==(const RelatedWorkResult&, const RelatedWorkResult&) = default;
};

void to_json(nlohmann::json& j, const Citation& c);
void from_json(const nlohmann::json& j, Citation& c);
void to_json(nlohmann::json& j, const RelatedWorkResult& r);
void from_json(const nlohmann::json& j, RelatedWorkResult& r);
void to_json(nlohmann::json& j, const GenerationParams& p);
void from_json(const nlohmann::json& j, GenerationParams& p);

/// Canonical in-prompt citation token: "[@arxiv:<id>]".
std::string citation_token(const std::string& arxiv_id);

/// Assembles the per-paper summarization prompt. When the estimate exceeds
/// max_context_tokens, pages are dropped lowest-similarity first, then the
/// paper abstract is shortened. Adjustments are appended to `notes`.
struct SummaryPrompt {
    std::string prompt;
    std::vector<std::size_t> pages_used;  // page indices, in entry order
    std::vector<std::string> notes;
};
SummaryPrompt build_summary_prompt(const std::string& input_abstract, const ShortlistEntry& entry,
                                   std::size_t max_context_tokens,
                                   const PromptTemplates& templates = PromptTemplates::builtin());

/// One tailored summary per shortlisted paper. An empty reply is retried
/// once; transport failures and repeated empty replies throw
/// Error(kLlmUnavailable) so the caller can drop the entry.
PaperSummary summarize_paper(const std::string& input_abstract, const ShortlistEntry& entry, LlmClient& llm,
                             const LlmConfig& cfg, const PromptTemplates& templates = PromptTemplates::builtin(),
                             std::vector<std::string>* warnings = nullptr);

/// Summarizes every entry with bounded parallelism. Dropped entries are
/// reported in `warnings`; output keeps shortlist order.
std::vector<PaperSummary> summarize_all(const std::string& input_abstract, const std::vector<ShortlistEntry>& shortlist,
                                        LlmClient& llm, const LlmConfig& cfg, std::size_t parallelism,
                                        std::vector<std::string>& warnings,
                                        const PromptTemplates& templates = PromptTemplates::builtin());

/// Builds the synthesis prompt. Summaries are truncated oldest-first when the
/// estimate exceeds max_context_tokens; throws Error(kSynthesis) if even that
/// cannot make it fit.
std::string build_synthesis_prompt(const std::string& input_abstract, const std::vector<PaperSummary>& summaries,
                                   std::size_t max_context_tokens, SynthesisMode mode,
                                   const std::string& question = {},
                                   const PromptTemplates& templates = PromptTemplates::builtin(),
                                   std::vector<std::string>* notes = nullptr);

/// Issues the synthesis prompt and returns the raw draft.
/// Throws Error(kSynthesis) on transport failure.
std::string synthesize(const std::string& input_abstract, const std::vector<PaperSummary>& summaries, LlmClient& llm,
                       const LlmConfig& cfg, SynthesisMode mode, const std::string& question = {},
                       const PromptTemplates& templates = PromptTemplates::builtin(),
                       std::vector<std::string>* warnings = nullptr);

struct CitationMetadata {
    std::string title;
    std::vector<std::string> authors;
    int year = 0;
};

/// Remote bibliographic lookup. Returns nullopt when the id is unknown;
/// throws Error(kTransport) when the service cannot be reached.
class MetadataSource {
public:
    virtual ~MetadataSource() = default;
    virtual std::optional<CitationMetadata> lookup(const std::string& arxiv_id) = 0;
};

/// arXiv Atom API (export.arxiv.org/api/query?id_list=<id>).
class ArxivMetadataSource final : public MetadataSource {
public:
    explicit ArxivMetadataSource(std::string base_url = "http://export.arxiv.org/api/query",
                                 std::shared_ptr<HttpTransport> transport = make_default_transport(),
                                 std::chrono::milliseconds timeout = std::chrono::milliseconds{15000});
    std::optional<CitationMetadata> lookup(const std::string& arxiv_id) override;

private:
    std::string base_url_;
    std::shared_ptr<HttpTransport> transport_;
    std::chrono::milliseconds timeout_;
};

/// Parses the first <entry> of an arXiv Atom feed.
std::optional<CitationMetadata> parse_arxiv_atom(const std::string& xml);

/// Remote lookup with fallback to the corpus store, then to id-only
/// metadata. Fallbacks taken after a remote failure are reported in
/// `warnings`. Throws a validation error for malformed ids.
CitationMetadata fetch_citation_metadata(const std::string& arxiv_id, MetadataSource* remote, const CorpusStore* store,
                                         std::vector<std::string>& warnings);

using MetadataLookup = std::function<CitationMetadata(const std::string& arxiv_id)>;

/// Resolves citation tokens in `draft`.
///
/// Tokens naming a shortlisted paper become sequential keys "[1]", "[2]",
/// ... in first-occurrence order and enter the citation list; all other
/// tokens, and any bare numeric markers the model produced itself, are
/// removed with a warning. Throws a validation error for an empty draft.
RelatedWorkResult finalize(const std::string& draft, const std::vector<std::string>& shortlist_ids,
                           const MetadataLookup& metadata);

/// Checks the result invariants (citations within shortlist, body keys equal
/// citation keys, unique keys, URLs derived from ids). Returns the first
/// violation, or nullopt when the result is well-formed.
std::optional<std::string> check_result_invariants(const RelatedWorkResult& result);

}  // namespace groundcite
