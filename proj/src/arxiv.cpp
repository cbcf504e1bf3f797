// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 groundcite contributors

#include "groundcite/arxiv.hpp"

#include <cstdio>
#include <regex>

#include <nlohmann/json.hpp>

#include "groundcite/error.hpp"
#include "text_util.hpp"

namespace groundcite {

namespace {

const std::regex& modern_id_re() {
    static const std::regex re(R"(^(\d{2})(\d{2})\.\d{4,5}(v\d+)?$)");
    return re;
}

const std::regex& legacy_id_re() {
    static const std::regex re(R"(^[a-z\-]+(\.[A-Z]{2})?/(\d{2})(\d{2})\d{3}(v\d+)?$)");
    return re;
}

std::string json_string_field(const nlohmann::json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return {};
    if (!it->is_string()) throw Error(ErrorCode::kParse, std::string("field '") + key + "' is not a string", key);
    return it->get<std::string>();
}

}  // namespace

bool is_valid_arxiv_id(std::string_view id) {
    const std::string s(id);
    return std::regex_match(s, modern_id_re()) || std::regex_match(s, legacy_id_re());
}

std::string strip_version(std::string_view id) {
    static const std::regex re(R"(v\d+$)");
    return std::regex_replace(std::string(id), re, "");
}

std::string id_version(std::string_view id) {
    static const std::regex re(R"(v(\d+)$)");
    std::smatch m;
    const std::string s(id);
    if (std::regex_search(s, m, re)) return m[1].str();
    return {};
}

std::string abs_url(std::string_view id) { return "https://arxiv.org/abs/" + std::string(id); }

std::optional<int> year_from_id(std::string_view id) {
    std::smatch m;
    const std::string s(id);
    int yy = -1;
    if (std::regex_match(s, m, modern_id_re())) {
        yy = std::stoi(m[1].str());
    } else if (std::regex_match(s, m, legacy_id_re())) {
        yy = std::stoi(m[2].str());
    } else {
        return std::nullopt;
    }
    // Legacy identifiers start in 1991 ("9108"); everything below is 20xx.
    return yy >= 91 ? 1900 + yy : 2000 + yy;
}

std::optional<int> year_from_date(std::string_view date) {
    if (date.size() < 4) return std::nullopt;
    int y = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        if (date[i] < '0' || date[i] > '9') return std::nullopt;
        y = y * 10 + (date[i] - '0');
    }
    if (date.size() > 4 && date[4] != '-') return std::nullopt;
    return y;
}

std::chrono::sys_seconds parse_utc_date(std::string_view date) {
    static const std::regex re(R"(^(\d{4})-(\d{2})-(\d{2}))");
    std::smatch m;
    const std::string s(date);
    if (!std::regex_search(s, m, re)) return std::chrono::sys_seconds{};
    const std::chrono::year_month_day ymd{std::chrono::year{std::stoi(m[1].str())},
                                          std::chrono::month{static_cast<unsigned>(std::stoi(m[2].str()))},
                                          std::chrono::day{static_cast<unsigned>(std::stoi(m[3].str()))}};
    if (!ymd.ok()) return std::chrono::sys_seconds{};
    return std::chrono::sys_seconds{std::chrono::sys_days{ymd}.time_since_epoch()};
}

std::string format_utc_date(std::chrono::sys_seconds t) {
    const std::chrono::year_month_day ymd{std::chrono::floor<std::chrono::days>(t)};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

std::vector<std::string> split_authors(std::string_view authors) {
    static const std::regex sep(R"(\s*,\s*(?:and\s+)?|\s+and\s+)");
    const std::string s = detail::collapse_whitespace(authors);
    std::vector<std::string> out;
    for (std::sregex_token_iterator it(s.begin(), s.end(), sep, -1), end; it != end; ++it) {
        std::string name = detail::trim(it->str());
        if (!name.empty()) out.push_back(std::move(name));
    }
    return out;
}

PaperMetadata parse_metadata_line(std::string_view line) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::kParse, std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw Error(ErrorCode::kParse, "record is not a JSON object");

    PaperMetadata m;
    m.arxiv_id = detail::trim(json_string_field(j, "id"));
    if (m.arxiv_id.empty()) throw Error(ErrorCode::kParse, "record has no id", "id");
    m.title = detail::collapse_whitespace(json_string_field(j, "title"));
    m.abstract = detail::collapse_whitespace(json_string_field(j, "abstract"));
    if (auto it = j.find("authors"); it != j.end()) {
        if (it->is_array()) {
            for (const auto& a : *it) {
                if (a.is_string()) m.authors.push_back(detail::collapse_whitespace(a.get<std::string>()));
            }
        } else if (it->is_string()) {
            m.authors = split_authors(it->get<std::string>());
        }
    }
    m.update_date = detail::trim(json_string_field(j, "update_date"));
    return m;
}

std::string to_metadata_line(const PaperMetadata& meta) {
    const nlohmann::json j = {{"id", meta.arxiv_id},
                              {"title", meta.title},
                              {"authors", meta.authors},
                              {"abstract", meta.abstract},
                              {"update_date", meta.update_date}};
    return j.dump();
}

}  // namespace groundcite
