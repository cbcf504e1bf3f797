// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 groundcite contributors

#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace groundcite {

/// Metadata of one paper as it appears in the arXiv metadata dump.
struct PaperMetadata {
    std::string arxiv_id;
    std::string title;
    std::vector<std::string> authors;
    std::string abstract;
    std::string update_date;  // "YYYY-MM-DD", may be empty

    friend bool operator==(const PaperMetadata&, const PaperMetadata&) = default;
};

/// Accepts modern ("2401.01234", optional "vN") and legacy ("cs/0101001",
/// "math.AG/0101001") identifiers.
bool is_valid_arxiv_id(std::string_view id);

/// Strips a trailing version suffix: "2401.01234v3" -> "2401.01234".
std::string strip_version(std::string_view id);
/// Version suffix without the "v" ("3"), or empty when unversioned.
std::string id_version(std::string_view id);

/// https://arxiv.org/abs/<id>
std::string abs_url(std::string_view id);

/// Submission year encoded in the identifier's YYMM prefix, if any.
std::optional<int> year_from_id(std::string_view id);

/// Leading four-digit year of an ISO-like date ("2024-03-05" -> 2024).
std::optional<int> year_from_date(std::string_view date);

/// Midnight UTC of a "YYYY-MM-DD" date; epoch when the date is empty or
/// malformed.
std::chrono::sys_seconds parse_utc_date(std::string_view date);
std::string format_utc_date(std::chrono::sys_seconds t);

/// Splits the dump's free-form author string ("A, B and C") into names.
std::vector<std::string> split_authors(std::string_view authors);

/// Parses one line of the metadata dump (a JSON object with at least id,
/// title, authors, abstract, update_date). Whitespace in title/abstract is
/// collapsed. Throws a parse error on malformed lines.
PaperMetadata parse_metadata_line(std::string_view line);

/// Inverse of parse_metadata_line for already-normalized metadata (authors
/// written as a JSON array). No trailing newline.
std::string to_metadata_line(const PaperMetadata& meta);

}  // namespace groundcite
