// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 groundcite contributors

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace groundcite {

/// The versioned prompt templates (see templates/README.md).
struct PromptTemplates {
    std::string version = "v1";
    std::string summarize;
    std::string synthesize_related_work;
    std::string synthesize_question;
    std::string judge_relevance;
    std::string judge_quality;

    /// Compiled-in copies of templates/*.v1.txt.
    static const PromptTemplates& builtin();
    /// Reads <dir>/<name>.<version>.txt; missing files fall back to the
    /// built-in text.
    static PromptTemplates load_dir(const std::filesystem::path& dir, const std::string& version = "v1");
};

/// Replaces every "{name}" with values.at(name). Unknown placeholders are
/// left untouched.
std::string render_template(std::string_view tpl, const std::map<std::string, std::string>& values);

}  // namespace groundcite
