// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 groundcite contributors

#include "groundcite/fulltext.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <thread>

#include "binary_io.hpp"
#include "groundcite/arxiv.hpp"
#include "groundcite/error.hpp"

namespace groundcite {

ArxivDocumentSource::ArxivDocumentSource(Options opts, std::shared_ptr<HttpTransport> transport)
    : opts_(std::move(opts)), transport_(std::move(transport)) {}

std::string ArxivDocumentSource::fetch(const std::string& arxiv_id) {
    if (!is_valid_arxiv_id(arxiv_id)) throw validation_error("arxiv_id", "malformed arXiv id: " + arxiv_id);
    HttpRequest req;
    req.url = opts_.base_url + arxiv_id;
    req.timeout = opts_.timeout;
    req.headers.emplace_back("User-Agent", "groundcite/0.1");

    std::string last_error;
    for (unsigned attempt = 0; attempt <= opts_.retries; ++attempt) {
        HttpResponse res;
        try {
            std::lock_guard lock(mu_);
            const auto ready = last_request_ + opts_.politeness_delay;
            if (last_request_ != std::chrono::steady_clock::time_point{}) std::this_thread::sleep_until(ready);
            last_request_ = std::chrono::steady_clock::now();
            res = transport_->send(req);
        } catch (const Error& e) {
            last_error = e.what();
            continue;
        }
        if (res.status == 404) throw Error(ErrorCode::kNotFound, "paper not found: " + arxiv_id);
        if (res.status >= 200 && res.status < 300 && !res.body.empty()) return std::move(res.body);
        last_error = "HTTP " + std::to_string(res.status);
    }
    throw Error(ErrorCode::kTransport, "fetching " + arxiv_id + " failed: " + last_error);
}

std::filesystem::path PageCache::path_for(const std::string& arxiv_id) const {
    std::string version = id_version(arxiv_id);
    version = version.empty() ? "latest" : "v" + version;
    // Legacy ids contain '/', which nests one extra directory level.
    return dir_ / strip_version(arxiv_id) / (version + ".txt");
}

std::optional<std::vector<std::string>> PageCache::load(const std::string& arxiv_id) const {
    const auto path = path_for(arxiv_id);
    std::error_code ec;
    if (!std::filesystem::exists(path, ec)) return std::nullopt;
    try {
        const std::string data = detail::read_file(path);
        detail::ByteReader r(data);
        const auto n = r.u32();
        std::vector<std::string> pages;
        for (std::uint32_t i = 0; i < n; ++i) pages.push_back(r.str());
        if (!r.at_end()) return std::nullopt;
        return pages;
    } catch (const Error&) {
        return std::nullopt;
    }
}

void PageCache::store(const std::string& arxiv_id, const std::vector<std::string>& pages) const {
    detail::ByteWriter w;
    w.u32(static_cast<std::uint32_t>(pages.size()));
    for (const auto& p : pages) w.str(p);
    detail::write_file_atomic(path_for(arxiv_id), w.bytes());
}

DocumentFetcher::DocumentFetcher(std::shared_ptr<DocumentSource> source, std::shared_ptr<TextExtractor> extractor,
                                 std::optional<PageCache> cache, CleaningRules rules)
    : source_(std::move(source)), extractor_(std::move(extractor)), cache_(std::move(cache)), rules_(std::move(rules)) {}

FetchedDocument DocumentFetcher::fetch_fulltext(const std::string& arxiv_id) const {
    std::optional<std::vector<std::string>> raw;
    if (cache_) raw = cache_->load(arxiv_id);
    if (!raw) {
        const std::string bytes = source_->fetch(arxiv_id);
        raw = extractor_->extract(bytes);
        if (cache_) cache_->store(arxiv_id, *raw);
    }
    FetchedDocument doc;
    doc.arxiv_id = arxiv_id;
    doc.raw_page_count = raw->size();
    doc.pages = clean_document(*raw, rules_);
    return doc;
}

std::vector<ScoredPage> score_pages(const FetchedDocument& doc, const EmbeddingVector& query, const Embedder& embedder) {
    if (!doc.usable()) throw Error(ErrorCode::kValidation, "document " + doc.arxiv_id + " has no usable pages");
    std::vector<std::string> texts;
    texts.reserve(doc.pages.size());
    for (const auto& p : doc.pages) texts.push_back(p.text);
    auto vectors = embedder.embed_texts(texts);
    std::vector<ScoredPage> out;
    out.reserve(doc.pages.size());
    for (std::size_t i = 0; i < doc.pages.size(); ++i) {
        const double sim = cosine_similarity(query, vectors[i]);
        out.push_back({doc.pages[i].index, doc.pages[i].text, std::move(vectors[i]), sim});
    }
    return out;
}

std::string page_candidate_id(std::size_t page_index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%08zu", page_index);
    return buf;
}

std::vector<ScoredPage> select_pages(const std::vector<ScoredPage>& scored, std::size_t depth, double w) {
    if (scored.empty()) throw validation_error("pages", "no scored pages to select from");
    std::vector<SelectionCandidate> pool;
    pool.reserve(scored.size());
    std::map<std::string, const ScoredPage*> by_id;
    for (const auto& p : scored) {
        pool.push_back({page_candidate_id(p.page_index), p.embedding, p.similarity});
        by_id[pool.back().id] = &p;
    }
    const auto picked = greedy_select(pool, std::min(std::max<std::size_t>(depth, 1), pool.size()), w);
    std::vector<ScoredPage> out;
    out.reserve(picked.selected.size());
    for (const auto& c : picked.selected) out.push_back(*by_id.at(c.id));
    return out;
}

double mean_similarity(const std::vector<SelectedPage>& pages) {
    if (pages.empty()) return 0.0;
    double s = 0.0;
    for (const auto& p : pages) s += p.similarity;
    return s / static_cast<double>(pages.size());
}

std::size_t shortlist_size(std::size_t survivors, const ShortlistConfig& cfg) {
    // The epsilon keeps e.g. 0.7 * 10 from rounding up to 8.
    const double raw = cfg.keep_ratio * static_cast<double>(survivors);
    const auto keep = static_cast<std::size_t>(std::ceil(raw - 1e-9));
    return std::min({keep, cfg.cap, survivors});
}

std::vector<ShortlistEntry> build_shortlist(std::vector<ShortlistEntry> survivors, const ShortlistConfig& cfg) {
    if (survivors.empty()) throw Error(ErrorCode::kNoUsableSources, "no usable sources");
    for (auto& e : survivors) e.mean_page_similarity = mean_similarity(e.selected_pages);
    std::stable_sort(survivors.begin(), survivors.end(), [](const ShortlistEntry& a, const ShortlistEntry& b) {
        if (a.mean_page_similarity != b.mean_page_similarity) return a.mean_page_similarity > b.mean_page_similarity;
        return a.arxiv_id < b.arxiv_id;
    });
    survivors.resize(shortlist_size(survivors.size(), cfg));
    return survivors;
}

PageAggregation parse_aggregation(const std::string& name) {
    if (name == "sum") return PageAggregation::kSum;
    if (name == "mean") return PageAggregation::kMean;
    if (name == "max") return PageAggregation::kMax;
    throw validation_error("aggregation", "aggregation must be one of sum, mean, max");
}

const char* aggregation_name(PageAggregation a) noexcept {
    switch (a) {
        case PageAggregation::kSum: return "sum";
        case PageAggregation::kMean: return "mean";
        case PageAggregation::kMax: return "max";
    }
    return "sum";
}

SelectionResult match_full_paper(const std::vector<std::string>& input_pages, const GenerationParams& params,
                                 const CorpusStore& store, const Embedder& embedder, const FullPaperConfig& cfg,
                                 const CleaningRules& rules) {
    validate_params(params);
    const auto pages = clean_document(input_pages, rules);
    if (pages.empty()) throw validation_error("document", "the input document has no usable text");
    if (store.count() == 0) throw Error(ErrorCode::kEmptyCorpus, "the corpus store is empty");

    std::vector<std::string> texts;
    for (const auto& p : pages) texts.push_back(p.text);
    const auto vectors = embedder.embed_texts(texts);

    const std::size_t pool_size = std::max<std::size_t>(1, cfg.pool_factor) * static_cast<std::size_t>(params.breadth);
    struct Acc {
        double sum = 0.0;
        double max = -std::numeric_limits<double>::infinity();
        std::size_t hits = 0;
    };
    std::map<std::string, Acc> acc;
    for (const auto& v : vectors) {
        for (const auto& hit : store.search(v, pool_size)) {
            auto& a = acc[hit.arxiv_id];
            a.sum += hit.similarity;
            a.max = std::max(a.max, hit.similarity);
            ++a.hits;
        }
    }

    std::vector<SearchHit> ranked;
    ranked.reserve(acc.size());
    const double n_pages = static_cast<double>(vectors.size());
    for (const auto& [id, a] : acc) {
        double score = a.sum;
        if (cfg.aggregation == PageAggregation::kMean) score = a.sum / n_pages;
        // A paper missed by some page query contributes 0 for that page.
        if (cfg.aggregation == PageAggregation::kMax) score = a.hits < vectors.size() ? std::max(a.max, 0.0) : a.max;
        ranked.push_back({id, score});
    }
    std::sort(ranked.begin(), ranked.end(), hit_before);
    if (ranked.size() > pool_size) ranked.resize(pool_size);

    if (!ranked.empty()) {
        const double hi = ranked.front().similarity;
        const double lo = ranked.back().similarity;
        for (auto& h : ranked) h.similarity = hi > lo ? (h.similarity - lo) / (hi - lo) : 1.0;
    }

    auto pool = candidates_from_hits(ranked, store);
    SelectionResult result;
    if (!pool.empty()) {
        result = greedy_select(pool, std::min<std::size_t>(static_cast<std::size_t>(params.breadth), pool.size()),
                               params.diversity);
    }
    result.underfilled = pool.size() < static_cast<std::size_t>(params.breadth);
    return result;
}

std::vector<CandidatePages> gather_pages(const SelectionResult& longlist, const EmbeddingVector& query,
                                         const GenerationParams& params, const CorpusStore& store,
                                         const DocumentFetcher& fetcher, const Embedder& embedder,
                                         std::size_t parallelism) {
    std::vector<CandidatePages> out(longlist.selected.size());
    auto work = [&](std::size_t i) {
        const std::string& id = longlist.selected[i].id;
        CandidatePages& slot = out[i];
        slot.arxiv_id = id;
        try {
            const auto doc = fetcher.fetch_fulltext(id);
            if (!doc.usable()) {
                slot.warning = "dropped " + id + ": no usable text after cleaning";
                return;
            }
            const auto scored = score_pages(doc, query, embedder);
            const auto picked = select_pages(scored, static_cast<std::size_t>(params.depth), params.diversity);
            ShortlistEntry entry;
            entry.arxiv_id = id;
            if (auto rec = store.get(id)) entry.abstract = rec->abstract;
            for (const auto& p : picked) entry.selected_pages.push_back({p.page_index, p.text, p.similarity});
            entry.mean_page_similarity = mean_similarity(entry.selected_pages);
            slot.entry = std::move(entry);
        } catch (const std::exception& e) {
            slot.warning = "dropped " + id + ": " + e.what();
        }
    };

    const std::size_t workers = std::clamp<std::size_t>(parallelism, 1, std::max<std::size_t>(out.size(), 1));
    if (workers <= 1) {
        for (std::size_t i = 0; i < out.size(); ++i) work(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) {
        threads.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < out.size(); i = next.fetch_add(1)) work(i);
        });
    }
    for (auto& th : threads) th.join();
    return out;
}

}  // namespace groundcite
