// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 groundcite contributors

#include "groundcite/hermetic.hpp"

#include <cctype>
#include <cstdio>
#include <random>
#include <regex>

#include "groundcite/error.hpp"
#include "text_util.hpp"

namespace groundcite {

namespace {

struct Topic {
    const char* area;
    std::vector<const char*> terms;
};

const std::vector<Topic>& topics() {
    static const std::vector<Topic> t = {
        {"retrieval", {"dense retrieval", "vector search", "query expansion", "reranking", "document ranking",
                       "passage retrieval", "sparse indexes", "relevance feedback"}},
        {"summarization", {"abstractive summarization", "extractive summaries", "long documents",
                           "faithfulness", "salience estimation", "multi-document summarization"}},
        {"citation analysis", {"citation recommendation", "citation context", "scholarly graphs",
                               "bibliometrics", "citation intent", "reference linking"}},
        {"language models", {"instruction tuning", "in-context learning", "decoding strategies",
                              "hallucination", "prompt design", "model calibration"}},
        {"graph learning", {"graph neural networks", "message passing", "node classification",
                            "link prediction", "graph pooling", "heterogeneous graphs"}},
        {"computer vision", {"image segmentation", "object detection", "vision transformers",
                             "self-supervised pretraining", "data augmentation", "depth estimation"}},
        {"reinforcement learning", {"policy gradients", "offline reinforcement learning", "reward shaping",
                                    "exploration bonuses", "model-based planning", "multi-agent coordination"}},
        {"optimization", {"stochastic gradient descent", "adaptive learning rates", "convergence analysis",
                          "second-order methods", "federated optimization", "gradient compression"}},
        {"speech", {"speech recognition", "speaker verification", "text-to-speech", "acoustic modeling",
                    "low-resource languages", "streaming decoders"}},
        {"fairness", {"algorithmic fairness", "bias mitigation", "demographic parity", "counterfactual fairness",
                      "auditing", "representation harms"}},
        {"knowledge graphs", {"entity linking", "relation extraction", "knowledge graph completion",
                              "ontology alignment", "question answering over graphs", "triple scoring"}},
        {"scientific writing", {"related work generation", "scientific text generation", "literature review",
                                "paper drafting", "survey synthesis", "discourse structure"}},
    };
    return t;
}

const char* const kAdjectives[] = {"Scalable", "Robust", "Efficient", "Adaptive", "Towards", "Rethinking",
                                   "Learning", "Grounded", "Interpretable", "Unified"};
const char* const kFirst[] = {"A.", "B.", "C.", "D.", "E.", "F.", "G.", "H.", "J.", "K.", "L.", "M."};
const char* const kLast[] = {"Nguyen", "Schmidt", "Rossi", "Kowalski", "Tanaka", "Okafor", "Silva",
                             "Haddad", "Larsen", "Petrov", "Moreau", "Chen", "Garcia", "Ibrahim"};

template <typename T, std::size_t N>
const T& pick(std::mt19937_64& rng, const T (&arr)[N]) {
    return arr[rng() % N];
}

const char* pick(std::mt19937_64& rng, const std::vector<const char*>& v) { return v[rng() % v.size()]; }

std::string sentence(std::mt19937_64& rng, const Topic& t) {
    const std::string a = pick(rng, t.terms), b = pick(rng, t.terms), c = pick(rng, t.terms);
    switch (rng() % 8) {
        case 0: return "We study " + a + " in the context of " + t.area + ".";
        case 1: return "Our approach combines " + a + " with " + b + " to improve " + c + ".";
        case 2: return "Experiments on standard benchmarks show consistent gains for " + a + ".";
        case 3: return "We analyze the trade-off between " + a + " and " + b + ".";
        case 4: return "Existing methods for " + a + " struggle when " + b + " is required.";
        case 5: return "We release code and data to support further work on " + c + ".";
        case 6: return "A theoretical analysis explains why " + a + " benefits from " + b + ".";
        default: return "The results suggest that " + a + " remains an open problem for " + t.area + ".";
    }
}

std::string make_abstract(std::mt19937_64& rng, const Topic& t) {
    std::string out;
    const std::size_t sentences = 5 + rng() % 3;
    for (std::size_t i = 0; i < sentences || out.size() < 200; ++i) {
        if (!out.empty()) out += ' ';
        out += sentence(rng, t);
    }
    return out;
}

}  // namespace

std::string synthetic_abstract(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const auto& t = topics()[rng() % topics().size()];
    return make_abstract(rng, t);
}

std::vector<PaperMetadata> synthetic_corpus(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<PaperMetadata> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& t = topics()[rng() % topics().size()];
        const int yy = 20 + static_cast<int>(rng() % 5);
        const int mm = 1 + static_cast<int>(rng() % 12);
        const int dd = 1 + static_cast<int>(rng() % 28);
        char id[32];
        std::snprintf(id, sizeof id, "%02d%02d.%05zu", yy, mm, i + 1);
        char date[16];
        std::snprintf(date, sizeof date, "20%02d-%02d-%02d", yy, mm, dd);

        PaperMetadata m;
        m.arxiv_id = id;
        std::string term = pick(rng, t.terms);
        term[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(term[0])));
        m.title = std::string(pick(rng, kAdjectives)) + " " + term + " for " + pick(rng, t.terms);
        const std::size_t n_authors = 1 + rng() % 4;
        for (std::size_t a = 0; a < n_authors; ++a) {
            m.authors.push_back(std::string(pick(rng, kFirst)) + " " + pick(rng, kLast));
        }
        m.abstract = make_abstract(rng, t);
        m.update_date = date;
        out.push_back(std::move(m));
    }
    return out;
}

std::vector<std::string> synthetic_pages(const std::string& arxiv_id, const std::string& title,
                                         const std::string& abstract, std::size_t pages) {
    if (pages == 0) return {};
    std::mt19937_64 rng(detail::fnv1a64(arxiv_id));
    auto words = detail::split_words(abstract);
    static const char* const kSections[] = {"Introduction", "Background", "Method", "Experimental Setup",
                                            "Results",      "Analysis",   "Discussion", "Limitations",
                                            "Conclusion"};
    std::vector<std::string> out;
    out.push_back(title + "\n\nAbstract\n" + abstract + "\n\n1 Introduction\n");
    for (std::size_t p = 1; p + 1 < pages; ++p) {
        std::string page = std::to_string(p + 1) + " " + kSections[p % std::size(kSections)] + "\n";
        for (std::size_t s = 0; s < 12; ++s) {
            std::string sent;
            const std::size_t len = 10 + rng() % 10;
            for (std::size_t w = 0; w < len && !words.empty(); ++w) {
                if (!sent.empty()) sent += ' ';
                sent += std::string(words[rng() % words.size()]);
            }
            page += sent;
            if (rng() % 4 == 0) page += " [" + std::to_string(1 + rng() % 30) + "]";
            page += ". ";
        }
        out.push_back(std::move(page));
    }
    if (pages > 1) {
        std::string refs = "References\n";
        for (int r = 1; r <= 8; ++r) {
            refs += "[" + std::to_string(r) + "] " + pick(rng, kFirst) + " " + pick(rng, kLast) +
                    ". An earlier study of " + std::string(words.empty() ? "this topic" : words[rng() % words.size()]) +
                    ". 2019.\n";
        }
        out.push_back(std::move(refs));
    }
    return out;
}

std::string SyntheticDocumentSource::fetch(const std::string& arxiv_id) {
    auto rec = store_->get(arxiv_id);
    if (!rec) rec = store_->get(strip_version(arxiv_id));
    if (!rec) throw Error(ErrorCode::kNotFound, "no document for " + arxiv_id);
    const auto pages = synthetic_pages(rec->arxiv_id, rec->title, rec->abstract, pages_);
    std::string out;
    for (std::size_t i = 0; i < pages.size(); ++i) {
        if (i) out += '\f';
        out += pages[i];
    }
    return out;
}

namespace {

std::string section_between(const std::string& text, std::string_view begin, std::string_view end) {
    auto b = text.find(begin);
    if (b == std::string::npos) return {};
    b += begin.size();
    const auto e = text.find(end, b);
    return detail::trim(std::string_view(text).substr(b, e == std::string::npos ? std::string::npos : e - b));
}

std::string first_words(std::string_view text, std::size_t n) {
    std::string out;
    for (auto w : detail::split_words(text)) {
        if (n-- == 0) break;
        if (!out.empty()) out += ' ';
        out += w;
    }
    return out;
}

}  // namespace

std::string HermeticLlm::complete(const LlmRequest& request) {
    const std::string& p = request.prompt;
    const std::uint64_t h = detail::fnv1a64(p);

    if (p.find("Score: <n>") != std::string::npos) {
        return "The assessment considers topical overlap and clarity.\nScore: " + std::to_string(5 + h % 5);
    }

    if (p.find("Selected pages from the candidate prior work:") != std::string::npos) {
        const auto abstract =
            section_between(p, "Abstract of a candidate prior work:", "Selected pages from the candidate prior work:");
        return "This prior work addresses the following: " + first_words(abstract, 40) +
               " It shares methodological themes with the researcher's paper.";
    }

    static const std::regex token_re(R"((?:^|\n)\[@arxiv:([^\]\s]+)\])");
    std::vector<std::string> ids;
    for (std::sregex_iterator it(p.begin(), p.end(), token_re), end; it != end; ++it) ids.push_back((*it)[1].str());
    if (ids.empty()) return "No prior works were provided.";

    const bool qa = p.find("\nQuestion:\n") != std::string::npos;
    std::string out = qa ? "Several of the retrieved papers bear on this question." : "Related Work\n\n";
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i % 3 == 0) out += i == 0 ? (qa ? " " : "") : "\n\n";
        else out += ' ';
        out += "Prior research explored a closely related direction [@arxiv:" + ids[i] + "].";
    }
    if (inject_) out += " A further study reports similar findings [@arxiv:9912.99999].";
    return out;
}

}  // namespace groundcite
