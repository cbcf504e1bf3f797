// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 groundcite contributors

// Command-line front end: generate, question, sync, evaluate, serve.

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "groundcite/config.hpp"
#include "groundcite/corpus_sync.hpp"
#include "groundcite/error.hpp"
#include "groundcite/evaluation.hpp"
#include "groundcite/hermetic.hpp"
#include "groundcite/pipeline.hpp"
#include "groundcite/service.hpp"

namespace gc = groundcite;

namespace {

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw gc::Error(gc::ErrorCode::kIo, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw gc::Error(gc::ErrorCode::kIo, "cannot write " + path);
    out << text;
}

std::shared_ptr<gc::FlatCorpusStore> open_store(const gc::AppConfig& cfg) {
    if (std::filesystem::exists(cfg.corpus.store_path)) {
        return std::make_shared<gc::FlatCorpusStore>(gc::FlatCorpusStore::load(cfg.corpus.store_path));
    }
    return std::make_shared<gc::FlatCorpusStore>(cfg.embedder.dim);
}

std::string render_text(const gc::RelatedWorkResult& r) {
    std::string out = r.body + "\n\nReferences\n";
    for (const auto& c : r.citations) {
        out += c.key + " ";
        for (std::size_t i = 0; i < c.authors.size(); ++i) out += (i ? ", " : "") + c.authors[i];
        if (!c.authors.empty()) out += ". ";
        out += c.title.empty() ? c.arxiv_id : c.title;
        if (c.year) out += ". " + std::to_string(c.year);
        out += ". " + c.url + "\n";
    }
    return out;
}

gc::Service* g_service = nullptr;
void on_signal(int) {
    if (g_service) g_service->stop();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Grounded related-work generation over an arXiv corpus"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("-c,--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);

    gc::GenerationParams params;
    auto add_params = [&](CLI::App* sub) {
        sub->add_option("--breadth", params.breadth, "Number of longlisted papers")->capture_default_str();
        sub->add_option("--depth", params.depth, "Pages kept per paper")->capture_default_str();
        sub->add_option("--diversity", params.diversity, "Diversity weight in [0, 1]")->capture_default_str();
    };
    std::string abstract_file, pdf_file, question, output, format = "text";
    auto add_output = [&](CLI::App* sub) {
        sub->add_option("-o,--output", output, "Write the result to this file instead of stdout");
        sub->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
    };

    auto* generate = app.add_subcommand("generate", "Write a related work section for an abstract or paper");
    auto* abs_opt = generate->add_option("--abstract-file", abstract_file, "File holding the abstract")
                        ->check(CLI::ExistingFile);
    auto* pdf_opt = generate->add_option("--pdf", pdf_file, "Full paper (PDF or plain text)")->check(CLI::ExistingFile);
    abs_opt->excludes(pdf_opt);
    add_params(generate);
    add_output(generate);

    auto* ask = app.add_subcommand("question", "Answer a question from the corpus");
    ask->add_option("--question", question, "The question")->required();
    ask->add_option("--abstract-file", abstract_file, "Context abstract")->required()->check(CLI::ExistingFile);
    add_params(ask);
    add_output(ask);

    std::string snapshot;
    std::size_t batch_size = 0;
    bool dry_run = false;
    auto* sync = app.add_subcommand("sync", "Synchronize the corpus with an arXiv metadata dump");
    sync->add_option("--snapshot", snapshot, "Metadata dump, one JSON object per line")
        ->required()
        ->check(CLI::ExistingFile);
    sync->add_option("--batch-size", batch_size, "Records per batch (default from config)");
    sync->add_flag("--dry-run", dry_run, "Classify only; do not modify the store");

    std::string cases_dir, judges_file;
    auto* evaluate = app.add_subcommand("evaluate", "Score generated sections with judge models");
    evaluate->add_option("--cases", cases_dir, "Directory of evaluation cases")->required()->check(CLI::ExistingDirectory);
    evaluate->add_option("--judges", judges_file, "Judge configuration (JSON)")->check(CLI::ExistingFile);
    evaluate->add_option("-o,--output", output, "Write the JSON report to this file");

    int port = -1;
    auto* serve = app.add_subcommand("serve", "Run the HTTP service");
    serve->add_option("--port", port, "Listen port (overrides config)");

    std::size_t corpus_count = 1000;
    std::uint64_t corpus_seed = 1;
    auto* make_corpus = app.add_subcommand("make-corpus", "Write a synthetic metadata dump");
    make_corpus->add_option("--count", corpus_count)->capture_default_str();
    make_corpus->add_option("--seed", corpus_seed)->capture_default_str();
    make_corpus->add_option("-o,--output", output)->required();

    app.add_subcommand("config", "Print the effective configuration");

    CLI11_PARSE(app, argc, argv);

    try {
        const auto cfg = gc::load_config(config_path.empty() ? std::nullopt
                                                             : std::optional<std::filesystem::path>(config_path));

        if (app.got_subcommand("config")) {
            auto j = gc::config_to_json(cfg);
            if (!j["service"]["admin_token"].get<std::string>().empty()) j["service"]["admin_token"] = "***";
            std::cout << j.dump(2) << "\n";
            return 0;
        }

        if (*make_corpus) {
            std::string text;
            for (const auto& m : gc::synthetic_corpus(corpus_count, corpus_seed)) text += gc::to_metadata_line(m) + "\n";
            write_text(output, text);
            return 0;
        }

        if (*generate || *ask) {
            gc::GenerationRequest req;
            req.params = params;
            if (*ask) {
                req.question = question;
                req.abstract = read_text(abstract_file);
            } else if (!pdf_file.empty()) {
                req.input = gc::InputKind::kDocument;
                req.document_pages = gc::AutoExtractor().extract(read_text(pdf_file));
            } else if (!abstract_file.empty()) {
                req.abstract = read_text(abstract_file);
            } else {
                throw gc::validation_error("abstract", "one of --abstract-file or --pdf is required");
            }
            auto store = open_store(cfg);
            gc::Pipeline pipeline(gc::make_backends(cfg, store), cfg.pipeline, cfg.llm);
            const auto result = pipeline.run(req, [](gc::Stage s, const std::string& note) {
                std::cerr << "[" << gc::stage_name(s) << "] " << note << "\n";
            });
            for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
            const std::string text = format == "json" ? nlohmann::json(result).dump(2) + "\n" : render_text(result);
            if (output.empty()) {
                std::cout << text;
            } else {
                write_text(output, text);
            }
            return 0;
        }

        if (*sync) {
            auto store = open_store(cfg);
            auto index = std::filesystem::exists(cfg.corpus.index_path) ? gc::HashIndex::load(cfg.corpus.index_path)
                                                                        : gc::index_from_store(*store);
            const auto backends = gc::make_backends(cfg, store);
            gc::NullTopicAssigner topics;
            gc::SyncOptions opts;
            opts.batch_size = batch_size ? batch_size : cfg.corpus.sync_batch_size;
            opts.dry_run = dry_run;
            const auto report = gc::reload(std::filesystem::path(snapshot), *store, index, *backends.embedder, topics, opts);
            if (!dry_run) {
                store->save(cfg.corpus.store_path);
                index.save(cfg.corpus.index_path);
            }
            std::cout << nlohmann::json(report).dump(2) << "\n";
            return 0;
        }

        if (*evaluate) {
            std::vector<gc::Judge> judges;
            if (judges_file.empty()) {
                judges.push_back({"mock", std::make_shared<gc::HermeticLlm>(), cfg.llm});
            } else {
                const auto j = nlohmann::json::parse(read_text(judges_file));
                for (const auto& jj : j.at("judges")) {
                    gc::Judge judge;
                    judge.id = jj.at("id").get<std::string>();
                    judge.config = cfg.llm;
                    judge.config.endpoint_url = jj.value("endpoint_url", cfg.llm.endpoint_url);
                    judge.config.model_id = jj.value("model_id", cfg.llm.model_id);
                    if (jj.value("backend", std::string("http")) == "mock") {
                        judge.client = std::make_shared<gc::HermeticLlm>();
                    } else {
                        judge.client = std::make_shared<gc::HttpLlmClient>(judge.config);
                    }
                    judges.push_back(std::move(judge));
                }
            }
            const auto cases = gc::load_eval_cases(cases_dir);
            auto run = gc::run_evaluation(cases, judges, cfg.eval_parallelism);
            const auto report = gc::aggregate(run.scores, std::move(run.failures));
            std::cout << gc::render_table(report);
            if (!output.empty()) write_text(output, nlohmann::json(report).dump(2) + "\n");
            return 0;
        }

        if (*serve) {
            auto effective = cfg;
            if (port >= 0) effective.service.port = port;
            auto service = gc::Service::from_config(effective);
            g_service = service.get();
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            std::cerr << "corpus: " << service->corpus_size() << " papers; listening on " << effective.service.host
                      << ":" << effective.service.port << "\n";
            service->serve();
            g_service = nullptr;
            return 0;
        }
    } catch (const gc::Error& e) {
        std::cerr << "error (" << gc::error_code_name(e.code()) << ")";
        if (!e.field().empty()) std::cerr << " [" << e.field() << "]";
        std::cerr << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
