// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 groundcite contributors

#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "groundcite/corpus_store.hpp"
#include "groundcite/embed_gateway.hpp"
#include "groundcite/extract.hpp"
#include "groundcite/greedy_select.hpp"
#include "groundcite/http_client.hpp"
#include "groundcite/retrieval.hpp"
#include "groundcite/text_clean.hpp"

namespace groundcite {

struct FetchedDocument {
    std::string arxiv_id;
    std::vector<CleanedPage> pages;  // non-empty cleaned pages, physical order
    std::size_t raw_page_count = 0;

    bool usable() const noexcept { return !pages.empty(); }
};

/// Retrieves the raw bytes of a paper. Throws Error(kNotFound) or
/// Error(kTransport) on failure.
class DocumentSource {
public:
    virtual ~DocumentSource() = default;
    virtual std::string fetch(const std::string& arxiv_id) = 0;
};

/// Downloads https://arxiv.org/pdf/<id> (base URL configurable), spacing
/// consecutive requests by at least `politeness_delay`.
class ArxivDocumentSource final : public DocumentSource {
public:
    struct Options {
        std::string base_url = "https://arxiv.org/pdf/";
        std::chrono::milliseconds politeness_delay{3000};
        std::chrono::milliseconds timeout{60000};
        unsigned retries = 1;
    };

    explicit ArxivDocumentSource(Options opts, std::shared_ptr<HttpTransport> transport = make_default_transport());
    std::string fetch(const std::string& arxiv_id) override;

private:
    Options opts_;
    std::shared_ptr<HttpTransport> transport_;
    std::mutex mu_;
    std::chrono::steady_clock::time_point last_request_{};
};

/// Page-set cache: <dir>/<arxiv_id>/<version>.txt holding the extracted
/// (pre-cleaning) pages as u32 count followed by u32-length-prefixed texts.
/// Unversioned ids use version "latest".
class PageCache {
public:
    explicit PageCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

    std::filesystem::path path_for(const std::string& arxiv_id) const;
    std::optional<std::vector<std::string>> load(const std::string& arxiv_id) const;
    void store(const std::string& arxiv_id, const std::vector<std::string>& pages) const;

private:
    std::filesystem::path dir_;
};

/// fetch -> extract -> clean for one paper.
class DocumentFetcher {
public:
    DocumentFetcher(std::shared_ptr<DocumentSource> source, std::shared_ptr<TextExtractor> extractor,
                    std::optional<PageCache> cache = std::nullopt, CleaningRules rules = {});

    /// Throws on fetch or extraction failure; the caller decides whether to
    /// drop the candidate.
    FetchedDocument fetch_fulltext(const std::string& arxiv_id) const;

    const CleaningRules& rules() const noexcept { return rules_; }

private:
    std::shared_ptr<DocumentSource> source_;
    std::shared_ptr<TextExtractor> extractor_;
    std::optional<PageCache> cache_;
    CleaningRules rules_;
};

struct ScoredPage {
    std::size_t page_index = 0;
    std::string text;
    EmbeddingVector embedding;
    double similarity = 0.0;
};

/// Embeds every page of `doc` and scores it against `query`, in page order.
std::vector<ScoredPage> score_pages(const FetchedDocument& doc, const EmbeddingVector& query, const Embedder& embedder);

/// Page candidates use a zero-padded page index as id so that the id
/// tie-break follows page order.
std::string page_candidate_id(std::size_t page_index);

/// Picks min(depth, pages) pages with the same diversity-weighted greedy rule
/// used for papers. Returned in selection order.
std::vector<ScoredPage> select_pages(const std::vector<ScoredPage>& scored, std::size_t depth, double w);

struct SelectedPage {
    std::size_t page_index = 0;
    std::string text;
    double similarity = 0.0;

    friend bool operator==(const SelectedPage&, const SelectedPage&) = default;
};

struct ShortlistEntry {
    std::string arxiv_id;
    std::string abstract;
    std::vector<SelectedPage> selected_pages;
    double mean_page_similarity = 0.0;

    friend bool operator==(const ShortlistEntry&, const ShortlistEntry&) = default;
};

struct ShortlistConfig {
    double keep_ratio = 0.7;
    std::size_t cap = 12;
};

/// Arithmetic mean of the selected pages' similarities (0 when none).
double mean_similarity(const std::vector<SelectedPage>& pages);

/// Number of survivors kept: min(ceil(keep_ratio * survivors), cap).
std::size_t shortlist_size(std::size_t survivors, const ShortlistConfig& cfg);

/// Recomputes each survivor's mean page similarity, ranks by it (descending,
/// ties by id) and keeps the top shortlist_size(). Throws
/// Error(kNoUsableSources) when there are no survivors.
std::vector<ShortlistEntry> build_shortlist(std::vector<ShortlistEntry> survivors, const ShortlistConfig& cfg = {});

enum class PageAggregation { kSum, kMean, kMax };
PageAggregation parse_aggregation(const std::string& name);
const char* aggregation_name(PageAggregation a) noexcept;

struct FullPaperConfig {
    std::size_t pool_factor = 5;
    PageAggregation aggregation = PageAggregation::kSum;
};

/// Candidate identification from a whole input paper: each cleaned page
/// queries the store; per-paper scores are aggregated across page queries
/// (missing = 0), the best pool_factor * breadth become candidates with
/// min-max normalized scores, and greedy selection picks breadth of them.
/// Throws a validation error if no page has text after cleaning.
SelectionResult match_full_paper(const std::vector<std::string>& input_pages, const GenerationParams& params,
                                 const CorpusStore& store, const Embedder& embedder, const FullPaperConfig& cfg = {},
                                 const CleaningRules& rules = {});

/// Per-candidate outcome of the fetch/score/select stage.
struct CandidatePages {
    std::string arxiv_id;
    std::optional<ShortlistEntry> entry;  // empty when dropped
    std::string warning;                  // reason for dropping
};

struct FulltextConfig {
    std::size_t parallelism = 4;
    ShortlistConfig shortlist;
};

/// Fetches, scores and selects pages for every longlisted paper (up to
/// `parallelism` at a time). Failures drop the candidate with a warning;
/// results come back in longlist order regardless of scheduling.
std::vector<CandidatePages> gather_pages(const SelectionResult& longlist, const EmbeddingVector& query,
                                         const GenerationParams& params, const CorpusStore& store,
                                         const DocumentFetcher& fetcher, const Embedder& embedder,
                                         std::size_t parallelism);

}  // namespace groundcite
