// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 groundcite contributors

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "groundcite/arxiv.hpp"
#include "groundcite/corpus_store.hpp"
#include "groundcite/fulltext.hpp"
#include "groundcite/llm.hpp"

// Offline stand-ins for the remote services: a synthetic metadata corpus, a
// document source that fabricates full texts from stored records, and an LLM
// that answers every prompt kind deterministically.

namespace groundcite {

/// `n` synthetic records with unique modern ids, topical titles and
/// abstracts of at least 200 characters. Same (n, seed) -> same records.
std::vector<PaperMetadata> synthetic_corpus(std::size_t n, std::uint64_t seed = 1);

/// Deterministic topical abstract of at least 200 characters.
std::string synthetic_abstract(std::uint64_t seed);

/// Full text of `pages` pages built from a title and abstract; the last page
/// is a reference list, inline numeric markers appear on body pages.
std::vector<std::string> synthetic_pages(const std::string& arxiv_id, const std::string& title,
                                         const std::string& abstract, std::size_t pages);

/// Serves synthetic_pages() of stored records as form-feed separated text
/// (pair with PlainTextExtractor). Unknown ids -> Error(kNotFound).
class SyntheticDocumentSource final : public DocumentSource {
public:
    explicit SyntheticDocumentSource(std::shared_ptr<const CorpusStore> store, std::size_t pages = 8)
        : store_(std::move(store)), pages_(pages) {}
    std::string fetch(const std::string& arxiv_id) override;

private:
    std::shared_ptr<const CorpusStore> store_;
    std::size_t pages_;
};

/// Recognizes the built-in prompt kinds: judge prompts get "Score: <n>",
/// summary prompts a paraphrase of the candidate abstract, synthesis prompts
/// a section citing every listed token. Replies depend only on the prompt.
class HermeticLlm final : public LlmClient {
public:
    /// When set, synthesis replies also cite a paper that was not listed.
    explicit HermeticLlm(bool inject_unlisted_citation = false) : inject_(inject_unlisted_citation) {}
    std::string complete(const LlmRequest& request) override;

private:
    bool inject_;
};

}  // namespace groundcite
