// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 groundcite contributors

#include "groundcite/extract.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <unistd.h>

#include "groundcite/error.hpp"
#include "text_util.hpp"

namespace groundcite {

bool is_valid_utf8(std::string_view s) noexcept {
    std::size_t i = 0;
    while (i < s.size()) {
        const auto c = static_cast<unsigned char>(s[i]);
        std::size_t n = 0;
        if (c < 0x80) {
            ++i;
            continue;
        } else if ((c & 0xE0) == 0xC0 && c >= 0xC2) {
            n = 1;
        } else if ((c & 0xF0) == 0xE0) {
            n = 2;
        } else if ((c & 0xF8) == 0xF0 && c <= 0xF4) {
            n = 3;
        } else {
            return false;
        }
        if (i + n >= s.size()) return false;
        for (std::size_t k = 1; k <= n; ++k) {
            if ((static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) return false;
        }
        i += n + 1;
    }
    return true;
}

std::vector<std::string> split_into_blocks(std::string_view text, std::size_t block_words) {
    if (block_words == 0) block_words = kDefaultBlockWords;
    const auto words = detail::split_words(text);
    std::vector<std::string> blocks;
    for (std::size_t i = 0; i < words.size(); i += block_words) {
        std::string block;
        for (std::size_t k = i; k < std::min(words.size(), i + block_words); ++k) {
            if (!block.empty()) block.push_back(' ');
            block.append(words[k]);
        }
        blocks.push_back(std::move(block));
    }
    return blocks;
}

std::vector<std::string> PlainTextExtractor::extract(std::string_view document) const {
    if (document.find('\0') != std::string_view::npos || !is_valid_utf8(document)) {
        throw Error(ErrorCode::kParse, "document is neither PDF nor UTF-8 text");
    }
    std::vector<std::string> pages;
    if (document.find('\f') == std::string_view::npos) {
        pages = split_into_blocks(document, block_words_);
    } else {
        std::size_t start = 0;
        while (start <= document.size()) {
            std::size_t end = document.find('\f', start);
            if (end == std::string_view::npos) end = document.size();
            pages.emplace_back(document.substr(start, end - start));
            start = end + 1;
        }
        // A trailing form feed does not open a new page.
        if (!pages.empty() && detail::trim(pages.back()).empty()) pages.pop_back();
    }
    if (pages.empty()) throw Error(ErrorCode::kParse, "document contains no text");
    return pages;
}

// ---------------------------------------------------------------------------
// PDF

namespace {

bool is_pdf_space(char c) noexcept { return c == ' ' || c == '\n' || c == '\r' || c == '\t' || c == '\f' || c == '\0'; }
bool is_pdf_delim(char c) noexcept {
    return c == '(' || c == ')' || c == '<' || c == '>' || c == '[' || c == ']' || c == '{' || c == '}' || c == '/' ||
           c == '%';
}
bool is_digit(char c) noexcept { return c >= '0' && c <= '9'; }

struct PdfObject {
    std::string dict;  // full "<< ... >>" text, or the raw body for non-dict objects
    std::string stream;
    bool has_stream = false;
};

std::string inflate(std::string_view in) {
    z_stream zs{};
    if (inflateInit(&zs) != Z_OK) return {};
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(in.data()));
    zs.avail_in = static_cast<uInt>(in.size());
    std::string out;
    std::array<char, 16384> buf{};
    int rc = Z_OK;
    do {
        zs.next_out = reinterpret_cast<Bytef*>(buf.data());
        zs.avail_out = static_cast<uInt>(buf.size());
        rc = inflate(&zs, Z_NO_FLUSH);
        out.append(buf.data(), buf.size() - zs.avail_out);
    } while (rc == Z_OK && (zs.avail_in > 0 || zs.avail_out == 0));
    inflateEnd(&zs);
    return out;
}

// Index just past the value starting at `i` inside a dictionary/array text.
std::size_t skip_value(std::string_view s, std::size_t i);

std::size_t skip_literal_string(std::string_view s, std::size_t i) {
    int depth = 0;
    for (; i < s.size(); ++i) {
        if (s[i] == '\\') {
            ++i;
        } else if (s[i] == '(') {
            ++depth;
        } else if (s[i] == ')') {
            if (--depth == 0) return i + 1;
        }
    }
    return s.size();
}

std::size_t skip_dict(std::string_view s, std::size_t i) {
    // s[i..i+1] == "<<"
    int depth = 0;
    while (i < s.size()) {
        if (s.compare(i, 2, "<<") == 0) {
            ++depth;
            i += 2;
        } else if (s.compare(i, 2, ">>") == 0) {
            i += 2;
            if (--depth == 0) return i;
        } else if (s[i] == '(') {
            i = skip_literal_string(s, i);
        } else {
            ++i;
        }
    }
    return s.size();
}

std::size_t skip_value(std::string_view s, std::size_t i) {
    while (i < s.size() && is_pdf_space(s[i])) ++i;
    if (i >= s.size()) return i;
    if (s.compare(i, 2, "<<") == 0) return skip_dict(s, i);
    if (s[i] == '(') return skip_literal_string(s, i);
    if (s[i] == '<') {
        auto e = s.find('>', i);
        return e == std::string_view::npos ? s.size() : e + 1;
    }
    if (s[i] == '[') {
        ++i;
        while (i < s.size()) {
            while (i < s.size() && is_pdf_space(s[i])) ++i;
            if (i < s.size() && s[i] == ']') return i + 1;
            const std::size_t next = skip_value(s, i);
            if (next == i) ++i;
            i = next;
        }
        return s.size();
    }
    if (s[i] == '/') {
        ++i;
        while (i < s.size() && !is_pdf_space(s[i]) && !is_pdf_delim(s[i])) ++i;
        return i;
    }
    // Number, keyword, or indirect reference "N G R".
    std::size_t j = i;
    while (j < s.size() && !is_pdf_space(s[j]) && !is_pdf_delim(s[j])) ++j;
    if (j > i && std::all_of(s.begin() + static_cast<std::ptrdiff_t>(i), s.begin() + static_cast<std::ptrdiff_t>(j), is_digit)) {
        // Look ahead for "G R".
        std::size_t k = j;
        while (k < s.size() && is_pdf_space(s[k])) ++k;
        std::size_t g = k;
        while (g < s.size() && is_digit(s[g])) ++g;
        if (g > k) {
            std::size_t r = g;
            while (r < s.size() && is_pdf_space(s[r])) ++r;
            if (r < s.size() && s[r] == 'R' && (r + 1 == s.size() || is_pdf_space(s[r + 1]) || is_pdf_delim(s[r + 1]))) {
                return r + 1;
            }
        }
    }
    return j;
}

// Raw text of the top-level value for `key` in a "<< ... >>" dictionary.
std::optional<std::string> dict_get(std::string_view dict, std::string_view key) {
    if (dict.size() < 4 || dict.compare(0, 2, "<<") != 0) return std::nullopt;
    std::size_t i = 2;
    while (i < dict.size()) {
        while (i < dict.size() && is_pdf_space(dict[i])) ++i;
        if (i >= dict.size() || dict.compare(i, 2, ">>") == 0) break;
        if (dict[i] != '/') {
            const std::size_t next = skip_value(dict, i);
            i = next > i ? next : i + 1;
            continue;
        }
        std::size_t name_end = i + 1;
        while (name_end < dict.size() && !is_pdf_space(dict[name_end]) && !is_pdf_delim(dict[name_end])) ++name_end;
        const std::string_view name = dict.substr(i + 1, name_end - i - 1);
        std::size_t vstart = name_end;
        while (vstart < dict.size() && is_pdf_space(dict[vstart])) ++vstart;
        const std::size_t vend = skip_value(dict, vstart);
        if (name == key) return std::string(dict.substr(vstart, vend - vstart));
        i = vend > name_end ? vend : name_end;
    }
    return std::nullopt;
}

std::vector<int> parse_refs(std::string_view value) {
    std::vector<int> refs;
    std::vector<long> nums;
    std::size_t i = 0;
    while (i < value.size()) {
        if (is_digit(value[i])) {
            std::size_t j = i;
            while (j < value.size() && is_digit(value[j])) ++j;
            nums.push_back(std::strtol(std::string(value.substr(i, j - i)).c_str(), nullptr, 10));
            i = j;
        } else if (value[i] == 'R') {
            if (nums.size() >= 2) refs.push_back(static_cast<int>(nums[nums.size() - 2]));
            nums.clear();
            ++i;
        } else {
            ++i;
        }
    }
    return refs;
}

std::optional<long> parse_int(const std::optional<std::string>& v) {
    if (!v || v->empty() || !std::all_of(v->begin(), v->end(), is_digit)) return std::nullopt;
    return std::strtol(v->c_str(), nullptr, 10);
}

bool has_name(const std::optional<std::string>& v, std::string_view name) {
    return v && v->find(std::string("/") + std::string(name)) != std::string::npos;
}

class PdfDocument {
public:
    explicit PdfDocument(std::string_view data) : data_(data) {
        scan_objects();
        expand_object_streams();
    }

    std::vector<std::string> page_texts() const;

private:
    void scan_objects();
    void expand_object_streams();
    std::string decoded_stream(const PdfObject& obj) const;
    void collect_pages(int obj_num, std::vector<int>& out, std::set<int>& seen) const;

    std::string_view data_;
    std::map<int, PdfObject> objects_;
};

void PdfDocument::scan_objects() {
    std::size_t pos = 0;
    while (true) {
        pos = data_.find("obj", pos);
        if (pos == std::string_view::npos) break;
        const std::size_t after = pos + 3;
        const bool delim_after = after >= data_.size() || is_pdf_space(data_[after]) || is_pdf_delim(data_[after]);
        // Walk back over "N G ".
        std::size_t b = pos;
        auto back_ws = [&] {
            std::size_t n = 0;
            while (b > 0 && is_pdf_space(data_[b - 1])) --b, ++n;
            return n;
        };
        auto back_num = [&] {
            std::size_t e = b;
            while (b > 0 && is_digit(data_[b - 1])) --b;
            return e - b;
        };
        bool ok = delim_after && pos > 0 && back_ws() > 0;
        std::size_t gen_len = ok ? back_num() : 0;
        ok = ok && gen_len > 0 && back_ws() > 0;
        const std::size_t num_end = b;
        const std::size_t num_len = ok ? back_num() : 0;
        ok = ok && num_len > 0 && (b == 0 || !is_digit(data_[b - 1]));
        if (!ok) {
            pos = after;
            continue;
        }
        const int num = static_cast<int>(std::strtol(std::string(data_.substr(b, num_end - b)).c_str(), nullptr, 10));

        std::size_t i = after;
        while (i < data_.size() && is_pdf_space(data_[i])) ++i;
        PdfObject obj;
        std::size_t body_end = i;
        if (data_.compare(i, 2, "<<") == 0) {
            body_end = skip_dict(data_, i);
            obj.dict = std::string(data_.substr(i, body_end - i));
            std::size_t k = body_end;
            while (k < data_.size() && is_pdf_space(data_[k])) ++k;
            if (data_.compare(k, 6, "stream") == 0) {
                std::size_t start = k + 6;
                if (data_.compare(start, 2, "\r\n") == 0) {
                    start += 2;
                } else if (start < data_.size() && (data_[start] == '\n' || data_[start] == '\r')) {
                    ++start;
                }
                std::size_t end = std::string_view::npos;
                if (auto len = parse_int(dict_get(obj.dict, "Length")); len && start + *len <= data_.size()) {
                    std::size_t e = start + static_cast<std::size_t>(*len);
                    std::size_t t = e;
                    while (t < data_.size() && is_pdf_space(data_[t])) ++t;
                    if (data_.compare(t, 9, "endstream") == 0) end = e;
                }
                if (end == std::string_view::npos) {
                    end = data_.find("endstream", start);
                    if (end == std::string_view::npos) end = data_.size();
                    std::size_t trimmed = end;
                    if (trimmed > start && data_[trimmed - 1] == '\n') --trimmed;
                    if (trimmed > start && data_[trimmed - 1] == '\r') --trimmed;
                    end = trimmed;
                }
                obj.stream = std::string(data_.substr(start, end - start));
                obj.has_stream = true;
                body_end = end;
            }
        } else {
            std::size_t e = data_.find("endobj", i);
            if (e == std::string_view::npos) e = data_.size();
            obj.dict = detail::trim(data_.substr(i, e - i));
            body_end = e;
        }
        objects_[num] = std::move(obj);
        pos = std::max(body_end, after);
    }
}

std::string PdfDocument::decoded_stream(const PdfObject& obj) const {
    if (!obj.has_stream) return {};
    const auto filter = dict_get(obj.dict, "Filter");
    if (!filter) return obj.stream;
    // Only a lone FlateDecode is supported; other filter chains yield nothing.
    const bool single = std::count(filter->begin(), filter->end(), '/') == 1;
    if (single && filter->find("/FlateDecode") != std::string::npos) return inflate(obj.stream);
    return {};
}

void PdfDocument::expand_object_streams() {
    std::vector<std::pair<int, PdfObject>> found;
    for (const auto& [num, obj] : objects_) {
        if (!obj.has_stream || !has_name(dict_get(obj.dict, "Type"), "ObjStm")) continue;
        const auto n = parse_int(dict_get(obj.dict, "N"));
        const auto first = parse_int(dict_get(obj.dict, "First"));
        if (!n || !first) continue;
        const std::string data = decoded_stream(obj);
        if (static_cast<std::size_t>(*first) > data.size()) continue;
        std::vector<long> header;
        {
            const std::string head = data.substr(0, static_cast<std::size_t>(*first));
            std::size_t i = 0;
            while (i < head.size()) {
                if (is_digit(head[i])) {
                    std::size_t j = i;
                    while (j < head.size() && is_digit(head[j])) ++j;
                    header.push_back(std::strtol(head.substr(i, j - i).c_str(), nullptr, 10));
                    i = j;
                } else {
                    ++i;
                }
            }
        }
        const std::size_t count = std::min<std::size_t>(static_cast<std::size_t>(*n), header.size() / 2);
        for (std::size_t k = 0; k < count; ++k) {
            const std::size_t off = static_cast<std::size_t>(*first + header[2 * k + 1]);
            const std::size_t end = k + 1 < count ? static_cast<std::size_t>(*first + header[2 * k + 3]) : data.size();
            if (off >= data.size() || end < off) continue;
            PdfObject inner;
            inner.dict = detail::trim(std::string_view(data).substr(off, std::min(end, data.size()) - off));
            found.emplace_back(static_cast<int>(header[2 * k]), std::move(inner));
        }
    }
    for (auto& [num, obj] : found) objects_.emplace(num, std::move(obj));
}

void PdfDocument::collect_pages(int obj_num, std::vector<int>& out, std::set<int>& seen) const {
    if (!seen.insert(obj_num).second) return;
    auto it = objects_.find(obj_num);
    if (it == objects_.end()) return;
    const auto type = dict_get(it->second.dict, "Type");
    if (type && *type == "/Page") {
        out.push_back(obj_num);
        return;
    }
    if (auto kids = dict_get(it->second.dict, "Kids")) {
        for (int kid : parse_refs(*kids)) collect_pages(kid, out, seen);
    }
}

// Content-stream interpreter that only cares about text-showing operators.
class ContentText {
public:
    std::string run(std::string_view s) {
        std::size_t i = 0;
        while (i < s.size()) {
            const char c = s[i];
            if (is_pdf_space(c)) {
                ++i;
            } else if (c == '%') {
                while (i < s.size() && s[i] != '\n' && s[i] != '\r') ++i;
            } else if (c == '(') {
                operands_.push_back({Kind::kString, literal(s, i), 0});
            } else if (s.compare(i, 2, "<<") == 0) {
                i = skip_dict(s, i);
            } else if (c == '<') {
                operands_.push_back({Kind::kString, hex(s, i), 0});
            } else if (c == '[') {
                operands_.push_back({Kind::kArrayStart, {}, 0});
                ++i;
            } else if (c == ']') {
                operands_.push_back({Kind::kArrayEnd, {}, 0});
                ++i;
            } else if (c == '/') {
                ++i;
                while (i < s.size() && !is_pdf_space(s[i]) && !is_pdf_delim(s[i])) ++i;
                operands_.push_back({Kind::kOther, {}, 0});
            } else if (is_digit(c) || c == '-' || c == '+' || c == '.') {
                std::size_t j = i + 1;
                while (j < s.size() && (is_digit(s[j]) || s[j] == '.')) ++j;
                operands_.push_back({Kind::kNumber, {}, std::strtod(std::string(s.substr(i, j - i)).c_str(), nullptr)});
                i = j;
            } else {
                std::size_t j = i;
                while (j < s.size() && !is_pdf_space(s[j]) && !is_pdf_delim(s[j])) ++j;
                if (j == i) j = i + 1;
                const std::string_view op = s.substr(i, j - i);
                i = j;
                if (op == "ID") {
                    // Inline image data runs until "EI".
                    const std::size_t ei = s.find("EI", i);
                    i = ei == std::string_view::npos ? s.size() : ei + 2;
                } else {
                    apply(op);
                }
                operands_.clear();
            }
        }
        return out_;
    }

private:
    enum class Kind { kString, kNumber, kArrayStart, kArrayEnd, kOther };
    struct Operand {
        Kind kind;
        std::string text;
        double number;
    };

    void newline() {
        if (!out_.empty() && out_.back() != '\n') out_.push_back('\n');
    }
    void space() {
        if (!out_.empty() && out_.back() != ' ' && out_.back() != '\n') out_.push_back(' ');
    }
    double num(std::size_t from_end) const {
        if (operands_.size() < from_end) return 0.0;
        const auto& o = operands_[operands_.size() - from_end];
        return o.kind == Kind::kNumber ? o.number : 0.0;
    }
    void show_last_string() {
        for (auto it = operands_.rbegin(); it != operands_.rend(); ++it) {
            if (it->kind == Kind::kString) {
                out_ += it->text;
                return;
            }
        }
    }

    void apply(std::string_view op) {
        if (op == "Tj") {
            show_last_string();
        } else if (op == "'" || op == "\"") {
            newline();
            show_last_string();
        } else if (op == "TJ") {
            for (const auto& o : operands_) {
                if (o.kind == Kind::kString) {
                    out_ += o.text;
                } else if (o.kind == Kind::kNumber && o.number < -200.0) {
                    space();
                }
            }
        } else if (op == "Td" || op == "TD") {
            if (num(1) != 0.0) {
                newline();
            } else if (num(2) != 0.0) {
                space();
            }
        } else if (op == "T*") {
            newline();
        } else if (op == "Tm") {
            const double y = num(1);
            if (!last_tm_y_ || *last_tm_y_ != y) {
                newline();
            } else {
                space();
            }
            last_tm_y_ = y;
        } else if (op == "ET") {
            space();
        }
    }

    static void put_byte(std::string& out, unsigned char b) {
        if (b == 0) return;
        if (b < 0x80) {
            out.push_back(static_cast<char>(b));
        } else {
            out.push_back(static_cast<char>(0xC0 | (b >> 6)));
            out.push_back(static_cast<char>(0x80 | (b & 0x3F)));
        }
    }

    static std::string literal(std::string_view s, std::size_t& i) {
        std::string out;
        int depth = 0;
        for (; i < s.size(); ++i) {
            const char c = s[i];
            if (c == '(') {
                if (depth++ > 0) out.push_back('(');
            } else if (c == ')') {
                if (--depth == 0) {
                    ++i;
                    return out;
                }
                out.push_back(')');
            } else if (c == '\\' && i + 1 < s.size()) {
                const char e = s[++i];
                switch (e) {
                    case 'n': out.push_back('\n'); break;
                    case 'r': out.push_back('\r'); break;
                    case 't': out.push_back('\t'); break;
                    case 'b': case 'f': break;
                    case '\r':
                        if (i + 1 < s.size() && s[i + 1] == '\n') ++i;
                        break;
                    case '\n': break;
                    default:
                        if (e >= '0' && e <= '7') {
                            int v = e - '0';
                            for (int k = 0; k < 2 && i + 1 < s.size() && s[i + 1] >= '0' && s[i + 1] <= '7'; ++k) {
                                v = v * 8 + (s[++i] - '0');
                            }
                            put_byte(out, static_cast<unsigned char>(v & 0xFF));
                        } else {
                            put_byte(out, static_cast<unsigned char>(e));
                        }
                }
            } else {
                put_byte(out, static_cast<unsigned char>(c));
            }
        }
        return out;
    }

    static std::string hex(std::string_view s, std::size_t& i) {
        std::string digits;
        ++i;
        for (; i < s.size() && s[i] != '>'; ++i) {
            if (std::isxdigit(static_cast<unsigned char>(s[i]))) digits.push_back(s[i]);
        }
        ++i;
        if (digits.size() % 2) digits.push_back('0');
        std::string out;
        for (std::size_t k = 0; k < digits.size(); k += 2) {
            put_byte(out, static_cast<unsigned char>(std::strtol(digits.substr(k, 2).c_str(), nullptr, 16)));
        }
        return out;
    }

    std::vector<Operand> operands_;
    std::optional<double> last_tm_y_;
    std::string out_;
};

std::vector<std::string> PdfDocument::page_texts() const {
    std::vector<int> pages;
    std::set<int> seen;
    for (const auto& [num, obj] : objects_) {
        if (!has_name(dict_get(obj.dict, "Type"), "Catalog")) continue;
        if (auto root_pages = dict_get(obj.dict, "Pages")) {
            for (int ref : parse_refs(*root_pages)) collect_pages(ref, pages, seen);
        }
        if (!pages.empty()) break;
    }
    if (pages.empty()) {
        for (const auto& [num, obj] : objects_) {
            const auto type = dict_get(obj.dict, "Type");
            if (type && *type == "/Page") pages.push_back(num);
        }
    }
    if (pages.empty()) throw Error(ErrorCode::kParse, "PDF has no pages");

    std::vector<std::string> out;
    for (int p : pages) {
        std::string content;
        if (auto contents = dict_get(objects_.at(p).dict, "Contents")) {
            for (int ref : parse_refs(*contents)) {
                auto it = objects_.find(ref);
                if (it == objects_.end()) continue;
                if (it->second.has_stream) {
                    content += decoded_stream(it->second);
                    content.push_back('\n');
                } else if (!it->second.dict.empty() && it->second.dict.front() == '[') {
                    // Indirect array of content streams.
                    for (int inner : parse_refs(it->second.dict)) {
                        auto jt = objects_.find(inner);
                        if (jt != objects_.end()) content += decoded_stream(jt->second) + "\n";
                    }
                }
            }
        }
        out.push_back(ContentText{}.run(content));
    }
    return out;
}

}  // namespace

std::vector<std::string> PdfTextExtractor::extract(std::string_view document) const {
    if (document.substr(0, 5) != "%PDF-") throw Error(ErrorCode::kParse, "not a PDF document");
    auto pages = PdfDocument(document).page_texts();
    const bool any_text = std::any_of(pages.begin(), pages.end(), [](const std::string& p) { return !detail::trim(p).empty(); });
    if (!any_text) throw Error(ErrorCode::kParse, "PDF contains no extractable text");
    return pages;
}

std::vector<std::string> CommandTextExtractor::extract(std::string_view document) const {
    char tmpl[] = "/tmp/groundcite-doc-XXXXXX";
    const int fd = mkstemp(tmpl);
    if (fd < 0) throw Error(ErrorCode::kIo, "cannot create temp file for extraction");
    ::close(fd);
    const std::filesystem::path path(tmpl);
    {
        std::ofstream out(path, std::ios::binary);
        out.write(document.data(), static_cast<std::streamsize>(document.size()));
    }
    std::string cmd = command_;
    const std::string quoted = "'" + path.string() + "'";
    if (auto p = cmd.find("{in}"); p != std::string::npos) {
        cmd.replace(p, 4, quoted);
    } else {
        cmd += " " + quoted;
    }
    std::string output;
    int status = -1;
    if (FILE* pipe = ::popen(cmd.c_str(), "r")) {
        std::array<char, 8192> buf{};
        std::size_t n = 0;
        while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) output.append(buf.data(), n);
        status = ::pclose(pipe);
    }
    std::error_code ec;
    std::filesystem::remove(path, ec);
    if (status != 0) throw Error(ErrorCode::kParse, "extraction command failed: " + command_);
    return PlainTextExtractor{}.extract(output);
}

std::vector<std::string> AutoExtractor::extract(std::string_view document) const {
    if (document.empty()) throw Error(ErrorCode::kParse, "document is empty");
    if (document.substr(0, 5) == "%PDF-") return pdf_->extract(document);
    return text_.extract(document);
}

}  // namespace groundcite
