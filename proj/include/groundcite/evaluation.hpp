// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 groundcite contributors

#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "groundcite/llm.hpp"
#include "groundcite/prompts.hpp"

namespace groundcite {

enum class Metric { kRelevance, kQuality };
const char* metric_name(Metric m) noexcept;

/// A named judge model.
struct Judge {
    std::string id;
    std::shared_ptr<LlmClient> client;
    LlmConfig config;
};

struct JudgeScore {
    std::string judge_id;
    std::string item_id;
    Metric metric = Metric::kRelevance;
    int score = 0;  // 0..10
    std::string raw_response;

    friend bool operator==(const JudgeScore&, const JudgeScore&) = default;
};

struct JudgeFailure {
    std::string judge_id;
    std::string item_id;
    Metric metric = Metric::kRelevance;
    std::string reason;
    std::string raw_response;

    friend bool operator==(const JudgeFailure&, const JudgeFailure&) = default;
};

/// Exactly one of `score` and `failure` is set.
struct JudgeOutcome {
    std::optional<JudgeScore> score;
    std::optional<JudgeFailure> failure;
};

/// Strict parser for the judge reply format: the last non-empty line must be
/// "Score: <n>" with an integer n in [0, 10]. Anything else is nullopt.
std::optional<int> parse_judge_score(const std::string& response);

/// Appended to the original prompt when a reply could not be parsed.
extern const char* const kJudgeReprompt;

/// Scores one cited work against the source abstract. One reprompt on an
/// unparsable reply; a second failure, or a transport failure, yields a
/// failure entry. Throws a validation error for empty abstracts.
JudgeOutcome judge_relevance(const std::string& source_abstract, const std::string& citation_abstract, Judge& judge,
                             const std::string& item_id,
                             const PromptTemplates& templates = PromptTemplates::builtin());

/// Scores a full related work section against the source abstract.
JudgeOutcome judge_quality(const std::string& section_text, const std::string& source_abstract, Judge& judge,
                           const std::string& item_id, const PromptTemplates& templates = PromptTemplates::builtin());

struct ScoreStats {
    std::size_t n = 0;
    long long sum = 0;
    double mean = 0.0;
    double std = 0.0;  // sample (n-1) standard deviation; 0 when n == 1

    friend bool operator==(const ScoreStats&, const ScoreStats&) = default;
};

/// Throws Error(kEmptyReport) for an empty input.
ScoreStats score_stats(std::span<const int> scores);

struct EvalReport {
    std::size_t n_items = 0;  // distinct (metric, item) pairs with at least one score
    std::map<Metric, ScoreStats> metrics;
    std::map<Metric, std::map<std::string, ScoreStats>> per_judge;
    std::vector<JudgeFailure> failures;
};

/// Mean, sum and sample std per metric and per (metric, judge). Order of
/// `scores` does not matter. Throws Error(kEmptyReport) when `scores` is
/// empty.
EvalReport aggregate(const std::vector<JudgeScore>& scores, std::vector<JudgeFailure> failures = {});

void to_json(nlohmann::json& j, const ScoreStats& s);
void to_json(nlohmann::json& j, const JudgeFailure& f);
void to_json(nlohmann::json& j, const EvalReport& r);

/// Fixed-width text table of the report.
std::string render_table(const EvalReport& report);

struct CitedWork {
    std::string id;
    std::string abstract;
};

/// One evaluation case: the source abstract, a generated section and the
/// abstracts of the works it cites.
struct EvalCase {
    std::string id;
    std::string source_abstract;
    std::string section;
    std::vector<CitedWork> citations;
};

/// Parses {"id", "source_abstract", "section", "citations": [{"id",
/// "abstract"}]}; a missing id falls back to `fallback_id`.
EvalCase parse_eval_case(const nlohmann::json& j, const std::string& fallback_id);

/// Every *.json file in `dir`, sorted by file name.
std::vector<EvalCase> load_eval_cases(const std::filesystem::path& dir);

/// Every judge scores the quality of every case and the relevance of every
/// cited work (item ids "<case>" and "<case>/<citation>"). Calls run up to
/// `parallelism` at a time; scores come back in a fixed order.
struct EvalRun {
    std::vector<JudgeScore> scores;
    std::vector<JudgeFailure> failures;
};
EvalRun run_evaluation(const std::vector<EvalCase>& cases, std::vector<Judge>& judges, std::size_t parallelism,
                       const PromptTemplates& templates = PromptTemplates::builtin());

}  // namespace groundcite
