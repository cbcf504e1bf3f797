// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 groundcite contributors

#include "groundcite/synthesis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <map>
#include <regex>
#include <set>
#include <thread>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "groundcite/arxiv.hpp"
#include "groundcite/error.hpp"
#include "text_util.hpp"

namespace groundcite {

void to_json(nlohmann::json& j, const GenerationParams& p) {
    j = {{"breadth", p.breadth}, {"depth", p.depth}, {"diversity", p.diversity}};
}

void from_json(const nlohmann::json& j, GenerationParams& p) {
    p.breadth = j.value("breadth", 10);
    p.depth = j.value("depth", 2);
    p.diversity = j.value("diversity", 0.0);
}

void to_json(nlohmann::json& j, const Citation& c) {
    j = {{"key", c.key},         {"arxiv_id", c.arxiv_id}, {"title", c.title},
         {"authors", c.authors}, {"year", c.year},         {"url", c.url}};
}

void from_json(const nlohmann::json& j, Citation& c) {
    c.key = j.at("key").get<std::string>();
    c.arxiv_id = j.at("arxiv_id").get<std::string>();
    c.title = j.value("title", "");
    c.authors = j.value("authors", std::vector<std::string>{});
    c.year = j.value("year", 0);
    c.url = j.value("url", "");
}

void to_json(nlohmann::json& j, const RelatedWorkResult& r) {
    j = {{"body", r.body},
         {"citations", r.citations},
         {"params_used", r.params_used},
         {"shortlist_ids", r.shortlist_ids},
         {"warnings", r.warnings}};
}

void from_json(const nlohmann::json& j, RelatedWorkResult& r) {
    r.body = j.at("body").get<std::string>();
    r.citations = j.value("citations", std::vector<Citation>{});
    r.params_used = j.value("params_used", GenerationParams{});
    r.shortlist_ids = j.value("shortlist_ids", std::vector<std::string>{});
    r.warnings = j.value("warnings", std::vector<std::string>{});
}

std::string citation_token(const std::string& arxiv_id) { return "[@arxiv:" + arxiv_id + "]"; }

namespace {

std::string first_words(const std::string& text, std::size_t n) {
    const auto words = detail::split_words(text);
    std::string out;
    for (std::size_t i = 0; i < std::min(n, words.size()); ++i) {
        if (!out.empty()) out.push_back(' ');
        out.append(words[i]);
    }
    return out;
}

// Words to cut so that an estimate of `tokens` fits in `budget`.
std::size_t excess_words(double tokens, std::size_t budget) {
    return static_cast<std::size_t>(std::ceil((tokens - static_cast<double>(budget)) / 1.5));
}

std::string pages_block(const std::vector<SelectedPage>& pages) {
    if (pages.empty()) return "(no pages selected)";
    std::string out;
    for (const auto& p : pages) {
        if (!out.empty()) out += "\n\n";
        out += "[page " + std::to_string(p.page_index + 1) + "]\n" + p.text;
    }
    return out;
}

template <typename Fn>
void run_bounded(std::size_t count, std::size_t parallelism, Fn&& work) {
    const std::size_t workers = std::clamp<std::size_t>(parallelism, 1, std::max<std::size_t>(count, 1));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) work(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> threads;
    for (std::size_t t = 0; t < workers; ++t) {
        threads.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) work(i);
        });
    }
    for (auto& th : threads) th.join();
}

}  // namespace

SummaryPrompt build_summary_prompt(const std::string& input_abstract, const ShortlistEntry& entry,
                                   std::size_t max_context_tokens, const PromptTemplates& templates) {
    SummaryPrompt out;
    std::vector<SelectedPage> pages = entry.selected_pages;
    std::string paper_abstract = entry.abstract;
    std::string query_abstract = input_abstract;

    auto render = [&] {
        return render_template(templates.summarize, {{"input_abstract", query_abstract},
                                                     {"paper_abstract", paper_abstract},
                                                     {"pages", pages_block(pages)}});
    };

    std::string prompt = render();
    while (estimate_tokens(prompt) > static_cast<double>(max_context_tokens) && !pages.empty()) {
        auto worst = std::min_element(pages.begin(), pages.end(), [](const SelectedPage& a, const SelectedPage& b) {
            if (a.similarity != b.similarity) return a.similarity < b.similarity;
            return a.page_index > b.page_index;
        });
        out.notes.push_back("summary prompt for " + entry.arxiv_id + ": dropped page " +
                            std::to_string(worst->page_index + 1) + " to fit the context window");
        pages.erase(worst);
        prompt = render();
    }
    for (std::string* text : {&paper_abstract, &query_abstract}) {
        const double est = estimate_tokens(prompt);
        if (est <= static_cast<double>(max_context_tokens)) break;
        const std::size_t words = detail::word_count(*text);
        const std::size_t cut = std::min(words, excess_words(est, max_context_tokens));
        *text = first_words(*text, words - cut);
        out.notes.push_back("summary prompt for " + entry.arxiv_id + ": shortened " +
                            (text == &paper_abstract ? "paper" : "input") + " abstract by " + std::to_string(cut) +
                            " words");
        prompt = render();
    }
    out.prompt = std::move(prompt);
    for (const auto& p : pages) out.pages_used.push_back(p.page_index);
    return out;
}

PaperSummary summarize_paper(const std::string& input_abstract, const ShortlistEntry& entry, LlmClient& llm,
                             const LlmConfig& cfg, const PromptTemplates& templates,
                             std::vector<std::string>* warnings) {
    auto built = build_summary_prompt(input_abstract, entry, cfg.max_context_tokens, templates);
    if (warnings) warnings->insert(warnings->end(), built.notes.begin(), built.notes.end());
    const LlmRequest req = make_request(cfg, built.prompt);
    for (int attempt = 0; attempt < 2; ++attempt) {
        std::string reply;
        try {
            reply = llm.complete(req);
        } catch (const Error& e) {
            throw Error(ErrorCode::kLlmUnavailable, std::string("summarization failed: ") + e.what());
        }
        reply = detail::trim(reply);
        if (!reply.empty()) return PaperSummary{entry.arxiv_id, std::move(reply), std::move(built.pages_used)};
    }
    throw Error(ErrorCode::kLlmUnavailable, "summarization returned empty output twice");
}

std::vector<PaperSummary> summarize_all(const std::string& input_abstract, const std::vector<ShortlistEntry>& shortlist,
                                        LlmClient& llm, const LlmConfig& cfg, std::size_t parallelism,
                                        std::vector<std::string>& warnings, const PromptTemplates& templates) {
    struct Slot {
        std::optional<PaperSummary> summary;
        std::vector<std::string> notes;
    };
    std::vector<Slot> slots(shortlist.size());
    run_bounded(shortlist.size(), parallelism, [&](std::size_t i) {
        try {
            slots[i].summary = summarize_paper(input_abstract, shortlist[i], llm, cfg, templates, &slots[i].notes);
        } catch (const std::exception& e) {
            slots[i].notes.push_back("dropped " + shortlist[i].arxiv_id + ": " + e.what());
        }
    });
    std::vector<PaperSummary> out;
    for (auto& s : slots) {
        warnings.insert(warnings.end(), s.notes.begin(), s.notes.end());
        if (s.summary) out.push_back(std::move(*s.summary));
    }
    return out;
}

std::string build_synthesis_prompt(const std::string& input_abstract, const std::vector<PaperSummary>& summaries,
                                   std::size_t max_context_tokens, SynthesisMode mode, const std::string& question,
                                   const PromptTemplates& templates, std::vector<std::string>* notes) {
    if (summaries.empty()) throw Error(ErrorCode::kSynthesis, "no summaries to synthesize");
    if (mode == SynthesisMode::kQuestionAnswer && detail::trim(question).empty()) {
        throw validation_error("question", "question must not be empty");
    }
    std::vector<std::string> texts;
    for (const auto& s : summaries) texts.push_back(s.summary_text);

    auto render = [&] {
        std::string block;
        for (std::size_t i = 0; i < summaries.size(); ++i) {
            if (!block.empty()) block += "\n\n";
            block += citation_token(summaries[i].arxiv_id) + " " + texts[i];
        }
        if (mode == SynthesisMode::kQuestionAnswer) {
            return render_template(templates.synthesize_question,
                                   {{"input_abstract", input_abstract}, {"question", question}, {"summaries", block}});
        }
        return render_template(templates.synthesize_related_work,
                               {{"input_abstract", input_abstract}, {"summaries", block}});
    };

    std::string prompt = render();
    for (std::size_t i = 0; i < texts.size(); ++i) {
        const double est = estimate_tokens(prompt);
        if (est <= static_cast<double>(max_context_tokens)) break;
        const std::size_t words = detail::word_count(texts[i]);
        if (words <= 1) continue;
        const std::size_t keep = std::max<std::size_t>(1, words - std::min(words, excess_words(est, max_context_tokens)));
        texts[i] = first_words(texts[i], keep);
        if (notes) {
            notes->push_back("synthesis prompt: truncated summary of " + summaries[i].arxiv_id + " to " +
                             std::to_string(keep) + " words");
        }
        prompt = render();
    }
    if (estimate_tokens(prompt) > static_cast<double>(max_context_tokens)) {
        throw Error(ErrorCode::kSynthesis, "synthesis prompt does not fit the context window");
    }
    return prompt;
}

std::string synthesize(const std::string& input_abstract, const std::vector<PaperSummary>& summaries, LlmClient& llm,
                       const LlmConfig& cfg, SynthesisMode mode, const std::string& question,
                       const PromptTemplates& templates, std::vector<std::string>* warnings) {
    const std::string prompt =
        build_synthesis_prompt(input_abstract, summaries, cfg.max_context_tokens, mode, question, templates, warnings);
    std::string draft;
    try {
        draft = llm.complete(make_request(cfg, prompt));
    } catch (const Error& e) {
        throw Error(ErrorCode::kSynthesis, std::string("synthesis failed: ") + e.what());
    }
    if (detail::trim(draft).empty()) throw Error(ErrorCode::kSynthesis, "synthesis returned an empty draft");
    return draft;
}

// ---------------------------------------------------------------------------
// Citation metadata

namespace {

std::string xml_unescape(std::string s) {
    static const std::pair<const char*, const char*> kEntities[] = {
        {"&lt;", "<"}, {"&gt;", ">"}, {"&quot;", "\""}, {"&apos;", "'"}, {"&#39;", "'"}, {"&amp;", "&"}};
    for (const auto& [from, to] : kEntities) {
        std::size_t pos = 0;
        const std::string f(from);
        while ((pos = s.find(f, pos)) != std::string::npos) {
            s.replace(pos, f.size(), to);
            pos += std::strlen(to);
        }
    }
    return s;
}

std::optional<std::string> xml_element(const std::string& xml, const std::string& tag, std::size_t from,
                                       std::size_t to, std::size_t* end = nullptr) {
    const std::string open = "<" + tag;
    std::size_t p = xml.find(open, from);
    while (p != std::string::npos && p < to) {
        const char next = p + open.size() < xml.size() ? xml[p + open.size()] : '\0';
        if (next == '>' || next == ' ') break;
        p = xml.find(open, p + 1);
    }
    if (p == std::string::npos || p >= to) return std::nullopt;
    const std::size_t gt = xml.find('>', p);
    const std::size_t close = xml.find("</" + tag + ">", gt);
    if (gt == std::string::npos || close == std::string::npos || close > to) return std::nullopt;
    if (end) *end = close + tag.size() + 3;
    return detail::collapse_whitespace(xml_unescape(xml.substr(gt + 1, close - gt - 1)));
}

}  // namespace

std::optional<CitationMetadata> parse_arxiv_atom(const std::string& xml) {
    const std::size_t entry = xml.find("<entry");
    if (entry == std::string::npos) return std::nullopt;
    std::size_t entry_end = xml.find("</entry>", entry);
    if (entry_end == std::string::npos) entry_end = xml.size();

    // The API reports bad ids as an entry whose id points at its errors page.
    if (auto id = xml_element(xml, "id", entry, entry_end); id && id->find("/api/errors") != std::string::npos) {
        return std::nullopt;
    }
    auto title = xml_element(xml, "title", entry, entry_end);
    if (!title || title->empty()) return std::nullopt;

    CitationMetadata m;
    m.title = *title;
    if (auto published = xml_element(xml, "published", entry, entry_end)) {
        m.year = year_from_date(*published).value_or(0);
    }
    std::size_t pos = entry;
    while (true) {
        std::size_t author_end = 0;
        auto author = xml_element(xml, "author", pos, entry_end, &author_end);
        if (!author) break;
        const std::size_t author_start = xml.rfind("<author", author_end);
        if (auto name = xml_element(xml, "name", author_start, author_end)) m.authors.push_back(*name);
        pos = author_end;
    }
    return m;
}

ArxivMetadataSource::ArxivMetadataSource(std::string base_url, std::shared_ptr<HttpTransport> transport,
                                         std::chrono::milliseconds timeout)
    : base_url_(std::move(base_url)), transport_(std::move(transport)), timeout_(timeout) {}

std::optional<CitationMetadata> ArxivMetadataSource::lookup(const std::string& arxiv_id) {
    HttpRequest req;
    req.url = base_url_ + "?id_list=" + url_encode(arxiv_id);
    req.timeout = timeout_;
    const HttpResponse res = transport_->send(req);
    if (res.status < 200 || res.status >= 300) {
        throw Error(ErrorCode::kTransport, "arXiv metadata service returned HTTP " + std::to_string(res.status));
    }
    return parse_arxiv_atom(res.body);
}

CitationMetadata fetch_citation_metadata(const std::string& arxiv_id, MetadataSource* remote, const CorpusStore* store,
                                         std::vector<std::string>& warnings) {
    if (!is_valid_arxiv_id(arxiv_id)) throw validation_error("arxiv_id", "malformed arXiv id: " + arxiv_id);
    std::string remote_problem;
    if (remote) {
        try {
            if (auto m = remote->lookup(arxiv_id)) return *m;
            remote_problem = "not found remotely";
        } catch (const std::exception& e) {
            remote_problem = e.what();
        }
    }
    if (store) {
        if (auto rec = store->get(arxiv_id)) {
            if (remote) {
                warnings.push_back("metadata for " + arxiv_id + " taken from the local corpus (" + remote_problem + ")");
            }
            CitationMetadata m{rec->title, rec->authors, 0};
            m.year = year_from_id(arxiv_id).value_or(0);
            if (m.year == 0 && rec->updated_at.time_since_epoch().count() != 0) {
                m.year = year_from_date(format_utc_date(rec->updated_at)).value_or(0);
            }
            return m;
        }
    }
    warnings.push_back("no metadata found for " + arxiv_id + "; citation shows the identifier only");
    return CitationMetadata{arxiv_id, {}, year_from_id(arxiv_id).value_or(0)};
}

// ---------------------------------------------------------------------------
// Finalization

namespace {

const std::regex& token_re() {
    static const std::regex re(R"(\[@arxiv:\s*([^\]\s]*)\s*\])");
    return re;
}

const std::regex& numeric_marker_re() {
    static const std::regex re(R"(\[\s*\d+(?:\s*(?:,|;|-|–)\s*\d+)*\s*\])");
    return re;
}

const std::regex& body_key_re() {
    static const std::regex re(R"(\[(\d+)\])");
    return re;
}

constexpr char kOpen = '\x01';
constexpr char kClose = '\x02';

bool is_closing_punct(char c) { return c == '.' || c == ',' || c == ';' || c == ':' || c == ')' || c == '!' || c == '?'; }

}  // namespace

RelatedWorkResult finalize(const std::string& draft, const std::vector<std::string>& shortlist_ids,
                           const MetadataLookup& metadata) {
    if (detail::trim(draft).empty()) throw validation_error("draft", "draft is empty");

    std::unordered_map<std::string, std::string> resolve;  // token id -> shortlist id
    for (const auto& id : shortlist_ids) {
        resolve.emplace(id, id);
        resolve.emplace(strip_version(id), id);
    }

    std::string text = draft;
    std::erase_if(text, [](char c) { return c == kOpen || c == kClose; });

    // Pass 1: valid tokens become placeholders, invalid ones disappear.
    std::map<std::string, std::size_t> key_of;
    std::vector<std::string> cited;
    std::map<std::string, std::size_t> rejected;
    std::string staged;
    {
        auto begin = std::sregex_iterator(text.begin(), text.end(), token_re());
        std::size_t last = 0;
        for (auto it = begin; it != std::sregex_iterator(); ++it) {
            const auto& m = *it;
            staged.append(text, last, static_cast<std::size_t>(m.position()) - last);
            last = static_cast<std::size_t>(m.position() + m.length());
            const std::string id = m[1].str();
            auto found = resolve.find(id);
            if (found == resolve.end()) found = resolve.find(strip_version(id));
            if (found != resolve.end()) {
                auto [slot, inserted] = key_of.emplace(found->second, cited.size() + 1);
                if (inserted) cited.push_back(found->second);
                staged += kOpen + std::to_string(slot->second) + kClose;
            } else {
                ++rejected[id.empty() ? std::string("(empty)") : id];
                const char next = last < text.size() ? text[last] : '\0';
                if (!staged.empty() && staged.back() == ' ' && (next == '\0' || next == ' ' || next == '\n' || is_closing_punct(next))) {
                    staged.pop_back();
                }
            }
        }
        staged.append(text, last, std::string::npos);
    }

    // Pass 2: numeric markers the model wrote on its own are not grounded.
    std::size_t stray = 0;
    while (true) {
        std::string next;
        std::size_t removed = 0;
        auto begin = std::sregex_iterator(staged.begin(), staged.end(), numeric_marker_re());
        std::size_t last = 0;
        for (auto it = begin; it != std::sregex_iterator(); ++it) {
            next.append(staged, last, static_cast<std::size_t>(it->position()) - last);
            last = static_cast<std::size_t>(it->position() + it->length());
            ++removed;
            const char after = last < staged.size() ? staged[last] : '\0';
            if (!next.empty() && next.back() == ' ' &&
                (after == '\0' || after == ' ' || after == '\n' || is_closing_punct(after))) {
                next.pop_back();
            }
        }
        if (removed == 0) break;
        next.append(staged, last, std::string::npos);
        staged = std::move(next);
        stray += removed;
    }

    RelatedWorkResult result;
    result.shortlist_ids = shortlist_ids;
    result.body.reserve(staged.size());
    for (char c : staged) {
        if (c == kOpen) {
            result.body.push_back('[');
        } else if (c == kClose) {
            result.body.push_back(']');
        } else {
            result.body.push_back(c);
        }
    }

    for (const auto& [id, count] : rejected) {
        result.warnings.push_back("unsupported citation removed: " + id +
                                  (count > 1 ? " (" + std::to_string(count) + " occurrences)" : std::string{}));
    }
    if (stray > 0) {
        result.warnings.push_back("removed " + std::to_string(stray) + " numeric citation marker(s) not backed by a retrieved paper");
    }
    for (std::size_t i = 0; i < cited.size(); ++i) {
        Citation c;
        c.key = "[" + std::to_string(i + 1) + "]";
        c.arxiv_id = cited[i];
        c.url = abs_url(cited[i]);
        if (metadata) {
            const CitationMetadata m = metadata(cited[i]);
            c.title = m.title;
            c.authors = m.authors;
            c.year = m.year;
        }
        result.citations.push_back(std::move(c));
    }
    if (cited.empty()) {
        result.warnings.push_back("WARNING: the draft contains no citation of a retrieved paper; the citation list is empty");
    }
    return result;
}

std::optional<std::string> check_result_invariants(const RelatedWorkResult& result) {
    const std::set<std::string> shortlist(result.shortlist_ids.begin(), result.shortlist_ids.end());
    std::set<std::string> keys;
    for (const auto& c : result.citations) {
        if (!shortlist.count(c.arxiv_id)) return "citation " + c.arxiv_id + " is not in the shortlist";
        if (!keys.insert(c.key).second) return "duplicate citation key " + c.key;
        if (c.url != abs_url(c.arxiv_id)) return "citation " + c.arxiv_id + " has a URL not derived from its id";
    }
    std::set<std::string> body_keys;
    for (auto it = std::sregex_iterator(result.body.begin(), result.body.end(), body_key_re());
         it != std::sregex_iterator(); ++it) {
        body_keys.insert(it->str());
    }
    if (body_keys != keys) return "body keys and citation keys differ";
    return std::nullopt;
}

}  // namespace groundcite
