// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 groundcite contributors

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace groundcite {

/// Optional patterns on top of the built-in rules (ECMAScript regex, matched
/// case-insensitively).
struct CleaningRules {
    /// Extra whole-line headings that end the useful body of a document.
    std::vector<std::string> extra_cut_headings;
    /// Extra inline patterns removed like citation markers.
    std::vector<std::string> extra_removals;
};

/// True if `line` is an isolated "References", "Bibliography", "Appendix" or
/// "Acknowledg(e)ments" heading (optionally numbered, optional trailing ':').
bool is_cut_heading(std::string_view line, const CleaningRules& rules = {});

/// Cleans one page: removes bracketed numeric citation markers ("[3]",
/// "[1, 2]", "[4-6]"), drops everything from the first cut heading on, and collapses
/// whitespace runs to single spaces. Idempotent; never lengthens the text.
std::string clean_text(std::string_view page, const CleaningRules& rules = {});

struct CleanedPage {
    std::size_t index = 0;  // physical page index in the source document
    std::string text;

    friend bool operator==(const CleanedPage&, const CleanedPage&) = default;
};

/// Cleans a whole document. Once a cut heading is seen, the rest of that page
/// and all later pages are dropped. Pages that clean to empty are omitted.
std::vector<CleanedPage> clean_document(const std::vector<std::string>& pages, const CleaningRules& rules = {});

}  // namespace groundcite
