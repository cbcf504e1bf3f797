// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 groundcite contributors

#include <gtest/gtest.h>

#include "groundcite/error.hpp"
#include "groundcite/extract.hpp"
#include "groundcite/text_clean.hpp"
#include "support/pdf_writer.hpp"

using namespace groundcite;

namespace {

const std::vector<std::string> kPages = {
    "A Study of Things\nAbstract\nWe study things carefully.",
    "1 Introduction\nThings matter (a lot) and \\ so do backslashes.",
    "References\n[1] Someone. Something.",
};

void expect_same_text(const std::vector<std::string>& got, const std::vector<std::string>& want) {
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < want.size(); ++i) {
        // Line structure must survive so that headings can still be detected.
        EXPECT_EQ(clean_document({got[i]}).empty(), clean_document({want[i]}).empty()) << i;
        EXPECT_EQ(clean_text(got[i]), clean_text(want[i])) << i;
        EXPECT_NE(got[i].find('\n'), std::string::npos) << i;
    }
}

}  // namespace

TEST(PdfExtract, Compressed) {
    expect_same_text(PdfTextExtractor().extract(testsupport::make_pdf(kPages)), kPages);
}

TEST(PdfExtract, Uncompressed) {
    expect_same_text(PdfTextExtractor().extract(testsupport::make_pdf(kPages, {.compress = false})), kPages);
}

TEST(PdfExtract, ObjectStreams) {
    expect_same_text(PdfTextExtractor().extract(testsupport::make_pdf(kPages, {.object_streams = true})), kPages);
}

TEST(PdfExtract, ManyPagesKeepOrder) {
    std::vector<std::string> pages;
    for (int i = 0; i < 40; ++i) pages.push_back("page number " + std::to_string(i) + "\nsecond line");
    const auto got = PdfTextExtractor().extract(testsupport::make_pdf(pages));
    ASSERT_EQ(got.size(), pages.size());
    for (std::size_t i = 0; i < pages.size(); ++i) EXPECT_EQ(clean_text(got[i]), clean_text(pages[i]));
}

TEST(PdfExtract, GarbageIsParseError) {
    try {
        PdfTextExtractor().extract("%PDF-1.4\nnot really a pdf");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::kParse);
    }
}

TEST(PlainText, FormFeedsSeparatePages) {
    const auto pages = PlainTextExtractor().extract("one\ntwo\fthree\f");
    ASSERT_EQ(pages.size(), 2u);
    EXPECT_EQ(pages[0], "one\ntwo");
    EXPECT_EQ(pages[1], "three");
}

TEST(PlainText, BlocksWithoutFormFeeds) {
    std::string text;
    for (int i = 0; i < 25; ++i) text += "w" + std::to_string(i) + "  ";
    const auto pages = PlainTextExtractor(10).extract(text);
    ASSERT_EQ(pages.size(), 3u);
    EXPECT_EQ(pages[0], "w0 w1 w2 w3 w4 w5 w6 w7 w8 w9");
    EXPECT_EQ(pages[2], "w20 w21 w22 w23 w24");
}

TEST(PlainText, RejectsBinary) {
    EXPECT_THROW(PlainTextExtractor().extract(std::string("a\0b", 3)), Error);
    EXPECT_THROW(PlainTextExtractor().extract("bad \xC3\x28 utf8"), Error);
}

TEST(Utf8, Validation) {
    EXPECT_TRUE(is_valid_utf8(""));
    EXPECT_TRUE(is_valid_utf8("ascii"));
    EXPECT_TRUE(is_valid_utf8("\xC3\xA9\xE2\x80\x93\xF0\x9F\x98\x80"));
    EXPECT_FALSE(is_valid_utf8("\xC0\xAF"));        // overlong
    EXPECT_FALSE(is_valid_utf8("\xE2\x80"));        // truncated
    EXPECT_FALSE(is_valid_utf8("\xF5\x80\x80\x80"));  // beyond U+10FFFF
    EXPECT_FALSE(is_valid_utf8("\x80"));
}

TEST(AutoExtract, Dispatch) {
    AutoExtractor ex;
    EXPECT_EQ(ex.extract(testsupport::make_pdf(kPages)).size(), kPages.size());
    EXPECT_EQ(ex.extract("page one\fpage two").size(), 2u);
    try {
        ex.extract(std::string("\x89PNG\r\n\x1a\n\0\0", 10));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::kParse);
    }
}
