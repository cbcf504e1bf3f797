// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 groundcite contributors

#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace groundcite {

/// Document bytes -> ordered raw page texts. Throws Error(kParse) when the
/// document cannot be read.
class TextExtractor {
public:
    virtual ~TextExtractor() = default;
    virtual std::vector<std::string> extract(std::string_view document) const = 0;
};

inline constexpr std::size_t kDefaultBlockWords = 350;

/// Splits text without page boundaries into blocks of `block_words` words.
std::vector<std::string> split_into_blocks(std::string_view text, std::size_t block_words = kDefaultBlockWords);

/// UTF-8 text; form feeds separate pages. Text without form feeds is split
/// into word blocks.
class PlainTextExtractor final : public TextExtractor {
public:
    explicit PlainTextExtractor(std::size_t block_words = kDefaultBlockWords) : block_words_(block_words) {}
    std::vector<std::string> extract(std::string_view document) const override;

private:
    std::size_t block_words_;
};

/// Built-in PDF text extraction: walks the page tree (including compressed
/// object streams), inflates content streams and collects text-showing
/// operators. Glyphs are decoded as single-byte Latin-1; fonts relying on
/// ToUnicode maps come out garbled, in which case an external extractor is
/// the better choice.
class PdfTextExtractor final : public TextExtractor {
public:
    std::vector<std::string> extract(std::string_view document) const override;
};

/// Runs an external command (default "pdftotext -layout {in} -") that writes
/// form-feed separated pages to stdout. "{in}" is replaced by a temp file
/// holding the document.
class CommandTextExtractor final : public TextExtractor {
public:
    explicit CommandTextExtractor(std::string command = "pdftotext -layout {in} -") : command_(std::move(command)) {}
    std::vector<std::string> extract(std::string_view document) const override;

private:
    std::string command_;
};

/// Dispatches on content: "%PDF-" documents go to `pdf`, valid UTF-8 text to
/// the plain-text extractor, anything else is a parse error.
class AutoExtractor final : public TextExtractor {
public:
    explicit AutoExtractor(std::shared_ptr<TextExtractor> pdf = std::make_shared<PdfTextExtractor>())
        : pdf_(std::move(pdf)) {}
    std::vector<std::string> extract(std::string_view document) const override;

private:
    std::shared_ptr<TextExtractor> pdf_;
    PlainTextExtractor text_;
};

bool is_valid_utf8(std::string_view s) noexcept;

}  // namespace groundcite
