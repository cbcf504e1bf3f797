// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 groundcite contributors

#include "groundcite/prompts.hpp"

#include "binary_io.hpp"
#include "templates_generated.hpp"

namespace groundcite {

const PromptTemplates& PromptTemplates::builtin() {
    static const PromptTemplates t{
        "v1",
        generated::k_summarize,
        generated::k_synthesize_related_work,
        generated::k_synthesize_question,
        generated::k_judge_relevance,
        generated::k_judge_quality,
    };
    return t;
}

PromptTemplates PromptTemplates::load_dir(const std::filesystem::path& dir, const std::string& version) {
    PromptTemplates t = builtin();
    t.version = version;
    auto load = [&](const char* name, std::string& slot) {
        const auto path = dir / (std::string(name) + "." + version + ".txt");
        std::error_code ec;
        if (std::filesystem::exists(path, ec)) slot = detail::read_file(path);
    };
    load("summarize", t.summarize);
    load("synthesize_related_work", t.synthesize_related_work);
    load("synthesize_question", t.synthesize_question);
    load("judge_relevance", t.judge_relevance);
    load("judge_quality", t.judge_quality);
    return t;
}

std::string render_template(std::string_view tpl, const std::map<std::string, std::string>& values) {
    std::string out;
    out.reserve(tpl.size());
    std::size_t i = 0;
    while (i < tpl.size()) {
        if (tpl[i] == '{') {
            const std::size_t close = tpl.find('}', i + 1);
            if (close != std::string_view::npos) {
                const std::string name(tpl.substr(i + 1, close - i - 1));
                if (auto it = values.find(name); it != values.end()) {
                    out += it->second;
                    i = close + 1;
                    continue;
                }
            }
        }
        out.push_back(tpl[i++]);
    }
    return out;
}

}  // namespace groundcite
