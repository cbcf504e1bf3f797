// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 groundcite contributors

#include "groundcite/text_clean.hpp"

#include <regex>

#include "text_util.hpp"

namespace groundcite {

namespace {

const std::regex& heading_re() {
    static const std::regex re(
        R"(^\s*(?:(?:\d+(?:\.\d+)*|[ivxlc]+|[a-z])[.)]?\s+)?(?:references|bibliography|appendix(?:\s+[a-z0-9](?:\.\d+)?)?|appendices|acknowledge?ments?)\s*:?\s*$)",
        std::regex::ECMAScript | std::regex::icase);
    return re;
}

const std::regex& marker_re() {
    static const std::regex re(R"(\[\s*\d+(?:\s*(?:,|;|-|–)\s*\d+)*\s*\])");
    return re;
}

std::string remove_to_fixpoint(std::string text, const std::regex& re) {
    // A removal can splice a new match together ("[[1]2]" -> "[2]").
    while (true) {
        std::string next = std::regex_replace(text, re, "");
        if (next.size() == text.size()) return next;
        text = std::move(next);
    }
}

std::string remove_inline(std::string_view page, const CleaningRules& rules) {
    std::string text(page);
    std::vector<std::regex> extra;
    for (const auto& p : rules.extra_removals) extra.emplace_back(p, std::regex::ECMAScript | std::regex::icase);
    while (true) {
        const std::size_t before = text.size();
        text = remove_to_fixpoint(std::move(text), marker_re());
        for (const auto& re : extra) text = remove_to_fixpoint(std::move(text), re);
        if (text.size() == before) return text;
    }
}

// Returns the cleaned body of `page`; sets `cut` if a cut heading was hit.
std::string clean_page(std::string_view page, const CleaningRules& rules, bool& cut) {
    const std::string text = remove_inline(page, rules);
    std::size_t start = 0;
    std::size_t keep = text.size();
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        if (is_cut_heading(std::string_view(text).substr(start, end - start), rules)) {
            keep = start;
            cut = true;
            break;
        }
        start = end + 1;
    }
    return detail::collapse_whitespace(std::string_view(text).substr(0, keep));
}

}  // namespace

bool is_cut_heading(std::string_view line, const CleaningRules& rules) {
    const std::string s(line);
    if (std::regex_match(s, heading_re())) return true;
    for (const auto& p : rules.extra_cut_headings) {
        if (std::regex_match(detail::trim(s), std::regex(p, std::regex::ECMAScript | std::regex::icase))) return true;
    }
    return false;
}

std::string clean_text(std::string_view page, const CleaningRules& rules) {
    bool cut = false;
    return clean_page(page, rules, cut);
}

std::vector<CleanedPage> clean_document(const std::vector<std::string>& pages, const CleaningRules& rules) {
    std::vector<CleanedPage> out;
    bool cut = false;
    for (std::size_t i = 0; i < pages.size() && !cut; ++i) {
        std::string text = clean_page(pages[i], rules, cut);
        if (!text.empty()) out.push_back({i, std::move(text)});
    }
    return out;
}

}  // namespace groundcite
