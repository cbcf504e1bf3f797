// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 groundcite contributors

#include "groundcite/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <regex>
#include <set>
#include <thread>

#include <nlohmann/json.hpp>

#include "groundcite/error.hpp"
#include "text_util.hpp"

namespace groundcite {

const char* metric_name(Metric m) noexcept { return m == Metric::kQuality ? "quality" : "relevance"; }

const char* const kJudgeReprompt =
    "\n\nYour previous reply could not be read. Answer again and end with exactly one line of the form\n"
    "Score: <n>\nwhere <n> is an integer from 0 to 10.";

std::optional<int> parse_judge_score(const std::string& response) {
    std::string last;
    std::size_t end = response.size();
    while (end > 0) {
        const std::size_t nl = response.rfind('\n', end - 1);
        const std::size_t begin = nl == std::string::npos ? 0 : nl + 1;
        const auto line = detail::trim(std::string_view(response).substr(begin, end - begin));
        if (!line.empty()) {
            last = line;
            break;
        }
        if (nl == std::string::npos) break;
        end = nl;
    }
    static const std::regex re(R"(^Score:\s*(\d{1,2})$)");
    std::cmatch m;
    if (!std::regex_match(last.c_str(), last.c_str() + last.size(), m, re)) return std::nullopt;
    const int v = std::stoi(m[1].str());
    if (v < 0 || v > 10) return std::nullopt;
    return v;
}

namespace {

JudgeOutcome run_judge(const std::string& prompt, Judge& judge, const std::string& item_id, Metric metric) {
    JudgeOutcome out;
    std::string raw;
    try {
        raw = judge.client->complete(make_request(judge.config, prompt));
        auto v = parse_judge_score(raw);
        if (!v) {
            raw = judge.client->complete(make_request(judge.config, prompt + kJudgeReprompt));
            v = parse_judge_score(raw);
        }
        if (v) {
            out.score = JudgeScore{judge.id, item_id, metric, *v, raw};
        } else {
            out.failure = JudgeFailure{judge.id, item_id, metric, "unparsable judge response", raw};
        }
    } catch (const Error& e) {
        out.failure = JudgeFailure{judge.id, item_id, metric, std::string("judge unavailable: ") + e.what(), raw};
    }
    return out;
}

void require_text(const std::string& text, const char* field) {
    if (detail::trim(text).empty()) throw validation_error(field, std::string(field) + " must not be empty");
}

}  // namespace

JudgeOutcome judge_relevance(const std::string& source_abstract, const std::string& citation_abstract, Judge& judge,
                             const std::string& item_id, const PromptTemplates& templates) {
    require_text(source_abstract, "source_abstract");
    require_text(citation_abstract, "citation_abstract");
    const auto prompt = render_template(templates.judge_relevance,
                                        {{"source_abstract", source_abstract}, {"citation_abstract", citation_abstract}});
    return run_judge(prompt, judge, item_id, Metric::kRelevance);
}

JudgeOutcome judge_quality(const std::string& section_text, const std::string& source_abstract, Judge& judge,
                           const std::string& item_id, const PromptTemplates& templates) {
    require_text(section_text, "section");
    require_text(source_abstract, "source_abstract");
    const auto prompt =
        render_template(templates.judge_quality, {{"source_abstract", source_abstract}, {"section", section_text}});
    return run_judge(prompt, judge, item_id, Metric::kQuality);
}

ScoreStats score_stats(std::span<const int> scores) {
    if (scores.empty()) throw Error(ErrorCode::kEmptyReport, "no parsed scores to aggregate");
    ScoreStats s;
    s.n = scores.size();
    for (int v : scores) s.sum += v;
    s.mean = static_cast<double>(s.sum) / static_cast<double>(s.n);
    if (s.n > 1) {
        double ss = 0.0;
        for (int v : scores) ss += (v - s.mean) * (v - s.mean);
        s.std = std::sqrt(ss / static_cast<double>(s.n - 1));
    }
    return s;
}

EvalReport aggregate(const std::vector<JudgeScore>& scores, std::vector<JudgeFailure> failures) {
    if (scores.empty()) throw Error(ErrorCode::kEmptyReport, "no parsed scores to aggregate");
    // Sorting makes the floating-point sums independent of input order.
    std::map<Metric, std::vector<int>> by_metric;
    std::map<Metric, std::map<std::string, std::vector<int>>> by_judge;
    std::set<std::pair<Metric, std::string>> items;
    for (const auto& s : scores) {
        if (s.score < 0 || s.score > 10) throw Error(ErrorCode::kValidation, "judge score out of range");
        by_metric[s.metric].push_back(s.score);
        by_judge[s.metric][s.judge_id].push_back(s.score);
        items.emplace(s.metric, s.item_id);
    }
    EvalReport r;
    r.n_items = items.size();
    for (auto& [m, v] : by_metric) {
        std::sort(v.begin(), v.end());
        r.metrics[m] = score_stats(v);
    }
    for (auto& [m, judges] : by_judge) {
        for (auto& [j, v] : judges) {
            std::sort(v.begin(), v.end());
            r.per_judge[m][j] = score_stats(v);
        }
    }
    r.failures = std::move(failures);
    return r;
}

void to_json(nlohmann::json& j, const ScoreStats& s) {
    j = {{"n", s.n}, {"sum", s.sum}, {"mean", s.mean}, {"std", s.std}};
}

void to_json(nlohmann::json& j, const JudgeFailure& f) {
    j = {{"judge_id", f.judge_id},
         {"item_id", f.item_id},
         {"metric", metric_name(f.metric)},
         {"reason", f.reason},
         {"raw_response", f.raw_response}};
}

void to_json(nlohmann::json& j, const EvalReport& r) {
    nlohmann::json metrics = nlohmann::json::object();
    for (const auto& [m, s] : r.metrics) metrics[metric_name(m)] = s;
    nlohmann::json per_judge = nlohmann::json::object();
    for (const auto& [m, judges] : r.per_judge) {
        for (const auto& [id, s] : judges) per_judge[metric_name(m)][id] = s;
    }
    j = {{"n_items", r.n_items}, {"metrics", metrics}, {"per_judge", per_judge}, {"failures", r.failures}};
}

std::string render_table(const EvalReport& r) {
    std::string out;
    char line[160];
    std::snprintf(line, sizeof line, "%-10s %-16s %5s %8s %8s %8s\n", "metric", "judge", "n", "mean", "sum", "std");
    out += line;
    auto row = [&](Metric m, const std::string& judge, const ScoreStats& s) {
        std::snprintf(line, sizeof line, "%-10s %-16s %5zu %8.2f %8.2f %8.2f\n", metric_name(m), judge.c_str(), s.n,
                      s.mean, static_cast<double>(s.sum), s.std);
        out += line;
    };
    for (const auto& [m, s] : r.metrics) {
        row(m, "(all)", s);
        if (auto it = r.per_judge.find(m); it != r.per_judge.end()) {
            for (const auto& [id, js] : it->second) row(m, id, js);
        }
    }
    std::snprintf(line, sizeof line, "items: %zu  failures: %zu\n", r.n_items, r.failures.size());
    out += line;
    return out;
}

EvalCase parse_eval_case(const nlohmann::json& j, const std::string& fallback_id) {
    try {
        EvalCase c;
        c.id = j.value("id", fallback_id);
        c.source_abstract = j.at("source_abstract").get<std::string>();
        c.section = j.value("section", std::string());
        for (const auto& cj : j.value("citations", nlohmann::json::array())) {
            c.citations.push_back({cj.at("id").get<std::string>(), cj.at("abstract").get<std::string>()});
        }
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::kParse, "evaluation case " + fallback_id + ": " + e.what());
    }
}

std::vector<EvalCase> load_eval_cases(const std::filesystem::path& dir) {
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec)) throw Error(ErrorCode::kIo, "not a directory: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<EvalCase> cases;
    for (const auto& f : files) {
        std::ifstream in(f);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::kParse, f.filename().string() + ": " + e.what());
        }
        cases.push_back(parse_eval_case(j, f.stem().string()));
    }
    return cases;
}

EvalRun run_evaluation(const std::vector<EvalCase>& cases, std::vector<Judge>& judges, std::size_t parallelism,
                       const PromptTemplates& templates) {
    std::vector<std::function<JudgeOutcome()>> tasks;
    for (const auto& c : cases) {
        for (auto& judge : judges) {
            if (!detail::trim(c.section).empty()) {
                tasks.emplace_back([&c, &judge, &templates] {
                    return judge_quality(c.section, c.source_abstract, judge, c.id, templates);
                });
            }
            for (const auto& cited : c.citations) {
                tasks.emplace_back([&c, &cited, &judge, &templates] {
                    return judge_relevance(c.source_abstract, cited.abstract, judge, c.id + "/" + cited.id,
                                           templates);
                });
            }
        }
    }

    std::vector<JudgeOutcome> outcomes(tasks.size());
    std::vector<std::string> errors(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            try {
                outcomes[i] = tasks[i]();
            } catch (const Error& e) {
                errors[i] = e.what();
            }
        }
    };
    const std::size_t n_threads = std::clamp<std::size_t>(parallelism, 1, std::max<std::size_t>(tasks.size(), 1));
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    EvalRun run;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (!errors[i].empty()) throw Error(ErrorCode::kValidation, errors[i]);
        if (outcomes[i].score) run.scores.push_back(std::move(*outcomes[i].score));
        if (outcomes[i].failure) run.failures.push_back(std::move(*outcomes[i].failure));
    }
    return run;
}

}  // namespace groundcite
