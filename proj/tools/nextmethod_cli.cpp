#include "nextmethod/corpus.hpp"
#include "nextmethod/evaluation.hpp"
#include "nextmethod/http_server.hpp"
#include "nextmethod/model.hpp"
#include "nextmethod/service.hpp"
#include "nextmethod/tuning.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <csignal>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <thread>

using namespace nextmethod;
using json = nlohmann::json;

namespace {

struct CorpusSplit {
    TimeSplit split;
    std::vector<CommitRecord> all;  // mined and filtered
};

void report_diagnostics(const std::vector<CorpusDiagnostic>& diags, std::size_t limit = 20) {
    for (std::size_t i = 0; i < diags.size() && i < limit; ++i)
        std::cerr << "corpus:" << diags[i].line << ": " << diags[i].message << '\n';
    if (diags.size() > limit) std::cerr << "corpus: " << diags.size() - limit << " more diagnostics\n";
}

/// Parses, extracts added methods over the whole corpus, splits on the
/// global time axis and applies the 2..10 filter to each block.
CorpusSplit load_split(const std::string& path, const SplitConfig& cfg) {
    ParsedCorpus parsed = parse_corpus_file(path);
    report_diagnostics(parsed.diagnostics);
    if (parsed.commits.empty()) throw std::runtime_error("corpus " + path + " holds no valid commits");
    extract_added_methods(parsed.commits);
    CorpusSplit out;
    out.split = time_split(std::move(parsed.commits), cfg);
    out.split.train = filter_commits(std::move(out.split.train));
    out.split.validation = filter_commits(std::move(out.split.validation));
    out.split.test = filter_commits(std::move(out.split.test));
    return out;
}

std::size_t method_count(const std::vector<CommitRecord>& commits) {
    std::size_t n = 0;
    for (const auto& c : commits) n += c.added_methods.size();
    return n;
}

void print_report(const std::string& title, const EvalReport& report) {
    std::cout << title << '\n';
    for (const auto& [label, value] : report_rows(report))
        std::cout << "  " << std::left << std::setw(30) << label << value << '\n';
}

json report_json(const EvalReport& report) {
    json j = json::object();
    for (const auto& [label, value] : report_rows(report)) j[label] = value;
    return j;
}

std::sig_atomic_t volatile g_stop = 0;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Next-method recommendations mined from commit histories"};
    app.require_subcommand(1);

    // corpus validate
    auto* corpus_cmd = app.add_subcommand("corpus", "Corpus utilities");
    corpus_cmd->require_subcommand(1);
    auto* validate = corpus_cmd->add_subcommand("validate", "Check a JSONL corpus and report malformed records");
    std::string validate_path;
    bool validate_strict = false;
    validate->add_option("corpus", validate_path, "JSONL corpus")->required();
    validate->add_flag("--strict", validate_strict, "Exit with status 1 if any diagnostic is reported");

    // mine
    auto* mine = app.add_subcommand("mine", "Extract added methods and apply the 2..10 commit filter");
    std::string mine_corpus, mine_out;
    mine->add_option("--corpus", mine_corpus, "JSONL corpus")->required();
    mine->add_option("--out", mine_out, "Write one JSON object per retained added method");

    // build-model
    auto* build = app.add_subcommand("build-model", "Cluster methods and mine rules into a model file");
    std::string build_corpus, build_out, build_split = "0.8,0.1,0.1", build_dump;
    double b_lambda = 0.90, b_sup = 8.0e-6, b_con = 0.50;
    std::optional<double> b_gamma;
    std::size_t b_max_lhs = 2;
    bool b_strict = false, b_drop = false;
    unsigned b_workers = 1;
    build->add_option("--corpus", build_corpus, "JSONL corpus")->required();
    build->add_option("--out", build_out, "Model file to write")->required();
    build->add_option("--split", build_split, "train,validation,test fractions; the model uses the train block")
        ->capture_default_str();
    build->add_option("--lambda", b_lambda, "Clustering threshold")->capture_default_str();
    build->add_option("--gamma", b_gamma, "Assignment threshold for new methods (default: lambda)");
    build->add_option("--sup", b_sup, "Minimum support")->capture_default_str();
    build->add_option("--con", b_con, "Minimum confidence")->capture_default_str();
    build->add_option("--max-lhs", b_max_lhs, "Largest rule LHS")->capture_default_str();
    build->add_flag("--strict-threshold", b_strict, "Keep only edges strictly above lambda");
    build->add_flag("--drop-singletons", b_drop, "Discard one-method clusters");
    build->add_option("--dump-transactions", build_dump, "Write the mining transactions, one per line");
    build->add_option("--workers", b_workers, "Threads for graph construction")->capture_default_str();

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "Replay held-out commits against a model");
    std::string eval_model, eval_corpus, eval_split = "0.8,0.1,0.1", eval_block = "test";
    std::optional<int> eval_min_lines;
    bool eval_json = false;
    evaluate->add_option("--model", eval_model, "Model file")->required();
    evaluate->add_option("--corpus", eval_corpus, "JSONL corpus")->required();
    evaluate->add_option("--split", eval_split, "train,validation,test fractions")->capture_default_str();
    evaluate->add_option("--set", eval_block, "Block to replay")
        ->check(CLI::IsMember({"train", "validation", "test"}))
        ->capture_default_str();
    evaluate->add_option("--min-lines", eval_min_lines, "Also report metrics restricted to methods of this length");
    evaluate->add_flag("--json", eval_json, "Print JSON instead of a table");

    // tune
    auto* tune_cmd = app.add_subcommand("tune", "Sweep the parameter grid on the validation block");
    std::string tune_corpus, tune_grid, tune_out, tune_split = "0.8,0.1,0.1";
    unsigned tune_workers = std::max(1u, std::thread::hardware_concurrency());
    bool tune_strict = false;
    tune_cmd->add_option("--corpus", tune_corpus, "JSONL corpus")->required();
    tune_cmd->add_option("--grid", tune_grid, "TOML grid (default: the built-in 1,080-point grid)");
    tune_cmd->add_option("--out", tune_out, "Results CSV")->required();
    tune_cmd->add_option("--split", tune_split, "train,validation,test fractions")->capture_default_str();
    tune_cmd->add_option("--workers", tune_workers, "Worker threads")->capture_default_str();
    tune_cmd->add_flag("--strict-threshold", tune_strict, "Keep only edges strictly above lambda");

    // select-presets
    auto* select = app.add_subcommand("select-presets", "Pick high/medium/low configurations from tuning results");
    std::string sel_results, sel_out, sel_corpus, sel_model_dir, sel_split = "0.8,0.1,0.1";
    select->add_option("--results", sel_results, "Results CSV from tune")->required();
    select->add_option("--out", sel_out, "Write the selection as JSON");
    select->add_option("--corpus", sel_corpus, "Build one model per selected preset from this corpus");
    select->add_option("--model-dir", sel_model_dir, "Directory for high.model, medium.model, low.model");
    select->add_option("--split", sel_split, "train,validation,test fractions")->capture_default_str();

    // serve
    auto* serve = app.add_subcommand("serve", "Run the HTTP recommendation service");
    std::string serve_presets, serve_host = "127.0.0.1";
    int serve_port = 8080;
    serve->add_option("--presets", serve_presets, "high,medium,low model files; leave a slot empty to skip it")
        ->required();
    serve->add_option("--port", serve_port, "TCP port (0 picks a free one)")->capture_default_str();
    serve->add_option("--host", serve_host, "Bind address")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*validate) {
            const ParsedCorpus parsed = parse_corpus_file(validate_path);
            report_diagnostics(parsed.diagnostics, parsed.diagnostics.size());
            std::cout << parsed.commits.size() << " commits, " << parsed.diagnostics.size() << " diagnostics\n";
            return validate_strict && !parsed.diagnostics.empty() ? 1 : 0;
        }

        if (*mine) {
            ParsedCorpus parsed = parse_corpus_file(mine_corpus);
            report_diagnostics(parsed.diagnostics);
            const std::size_t total = parsed.commits.size();
            extract_added_methods(parsed.commits);
            const auto kept = filter_commits(std::move(parsed.commits));
            std::cout << total << " commits read, " << kept.size() << " retained, " << method_count(kept)
                      << " added methods\n";
            if (!mine_out.empty()) {
                std::ofstream out(mine_out);
                if (!out) throw std::runtime_error("cannot write " + mine_out);
                for (const auto& c : kept)
                    for (const auto& m : c.added_methods)
                        out << json{{"method_id", m.method_id.value}, {"repo", m.repo_id},     {"commit", m.commit_id},
                                    {"path", m.path},                 {"signature", m.signature},
                                    {"line_count", m.line_count},     {"source", m.source_text}}
                                   .dump()
                            << '\n';
            }
            return 0;
        }

        if (*build) {
            const auto data = load_split(build_corpus, parse_split(build_split));
            const auto& train = data.split.train;
            if (train.empty()) throw std::runtime_error("no training commits survive the split and filter");
            ModelConfig cfg;
            cfg.lambda = b_lambda;
            cfg.gamma = b_gamma.value_or(b_lambda);
            cfg.min_support = b_sup;
            cfg.min_confidence = b_con;
            cfg.max_lhs = b_max_lhs;
            cfg.edge_threshold = b_strict ? EdgeThreshold::strict : EdgeThreshold::inclusive;
            cfg.drop_singletons = b_drop;
            cfg.corpus_fingerprint = corpus_fingerprint(train);
            const auto clustered = cluster_training(train, cfg.lambda,
                                                    ClusterOptions{cfg.edge_threshold, cfg.drop_singletons, b_workers});
            if (!build_dump.empty()) {
                std::ofstream out(build_dump);
                if (!out) throw std::runtime_error("cannot write " + build_dump);
                dump_transactions(out, clustered.transactions);
            }
            const Model model = assemble_model(clustered, cfg);
            save_model(model, build_out);
            std::cout << train.size() << " training commits, " << method_count(train) << " methods, "
                      << model.clusters().size() << " clusters, " << clustered.transactions.size()
                      << " transactions, " << model.rules().size() << " rules -> " << build_out << '\n';
            return 0;
        }

        if (*evaluate) {
            const Model model = load_model(eval_model);
            const auto data = load_split(eval_corpus, parse_split(eval_split));
            const auto& block = eval_block == "train"        ? data.split.train
                                : eval_block == "validation" ? data.split.validation
                                                             : data.split.test;
            const auto outcomes = simulate_commits(block, model);
            const EvalReport all = compute_metrics(outcomes, method_count(block));
            if (eval_json) {
                json j{{"set", eval_block}, {"all", report_json(all)}};
                if (eval_min_lines) j["long_methods"] = report_json(long_method_reanalysis(outcomes, *eval_min_lines));
                std::cout << j.dump(2) << '\n';
            } else {
                print_report("all methods (" + eval_block + ")", all);
                if (eval_min_lines)
                    print_report("methods with at least " + std::to_string(*eval_min_lines) + " lines",
                                 long_method_reanalysis(outcomes, *eval_min_lines));
            }
            return 0;
        }

        if (*tune_cmd) {
            const TuningGrid grid = tune_grid.empty() ? TuningGrid::defaults() : load_grid(tune_grid);
            const auto data = load_split(tune_corpus, parse_split(tune_split));
            std::ofstream out(tune_out);
            if (!out) throw std::runtime_error("cannot write " + tune_out);
            write_results_header(out);
            std::size_t done = 0;
            TuningOptions opts;
            opts.workers = tune_workers;
            opts.edge_threshold = tune_strict ? EdgeThreshold::strict : EdgeThreshold::inclusive;
            opts.on_result = [&](const TuningResult& r) {
                write_result_row(out, r);
                out.flush();
                if (++done % 100 == 0) std::cerr << done << "/" << grid.size() << " configurations\n";
            };
            tune(grid, data.split.train, data.split.validation, opts);
            std::cout << done << " configurations -> " << tune_out << '\n';
            return 0;
        }

        if (*select) {
            std::ifstream in(sel_results);
            if (!in) throw std::runtime_error("cannot open " + sel_results);
            const auto presets = select_presets(read_results(in));
            json out = json::object();
            std::optional<CorpusSplit> data;
            if (!sel_corpus.empty()) data = load_split(sel_corpus, parse_split(sel_split));
            for (const auto& p : presets) {
                const std::string name = to_string(p.level);
                if (!p.choice) {
                    std::cout << name << ": no configuration reaches precision " << p.precision_floor << '\n';
                    out[name] = nullptr;
                    continue;
                }
                const auto& c = p.choice->config;
                const auto& r = p.choice->report;
                std::cout << name << ": con=" << c.min_confidence << " sup=" << c.min_support << " lambda=" << c.lambda
                          << " max_lhs=" << c.max_lhs << " (precision " << *r.precision << ", coverage_commits "
                          << *r.coverage_commits << ")\n";
                out[name] = json{{"con", c.min_confidence},  {"sup", c.min_support},
                                 {"lambda", c.lambda},       {"max_lhs", c.max_lhs},
                                 {"precision", *r.precision}, {"coverage_commits", *r.coverage_commits}};
                if (data) {
                    ModelConfig cfg;
                    cfg.lambda = c.lambda;
                    cfg.gamma = c.lambda;
                    cfg.min_support = c.min_support;
                    cfg.min_confidence = c.min_confidence;
                    cfg.max_lhs = c.max_lhs;
                    cfg.corpus_fingerprint = corpus_fingerprint(data->split.train);
                    const std::filesystem::path dir = sel_model_dir.empty() ? "." : sel_model_dir;
                    std::filesystem::create_directories(dir);
                    const auto path = dir / (name + ".model");
                    save_model(build_model(data->split.train, cfg), path);
                    std::cout << "  -> " << path.string() << '\n';
                }
            }
            if (!sel_out.empty()) {
                std::ofstream f(sel_out);
                if (!f) throw std::runtime_error("cannot write " + sel_out);
                f << out.dump(2) << '\n';
            }
            return 0;
        }

        if (*serve) {
            std::map<Sensitivity, std::shared_ptr<const Model>> models;
            const std::array<Sensitivity, 3> order{Sensitivity::high, Sensitivity::medium, Sensitivity::low};
            std::vector<std::string> paths;
            std::stringstream ss(serve_presets);
            std::string item;
            while (std::getline(ss, item, ',')) paths.push_back(item);
            if (paths.size() > 3) throw std::invalid_argument("--presets takes at most three files");
            for (std::size_t i = 0; i < paths.size(); ++i) {
                if (paths[i].empty()) continue;
                models[order[i]] = std::make_shared<const Model>(load_model(paths[i]));
                std::cerr << to_string(order[i]) << ": " << paths[i] << '\n';
            }
            Service service(std::move(models), default_journal_path());
            HttpServer server(service);
            int port = serve_port;
            if (port == 0) {
                port = server.bind_any_port(serve_host);
                if (port < 0) throw std::runtime_error("cannot bind " + serve_host);
            }
            std::cout << "listening on http://" << serve_host << ":" << port << std::endl;
            std::signal(SIGINT, [](int) { g_stop = 1; });
            std::signal(SIGTERM, [](int) { g_stop = 1; });
            std::jthread watcher([&](std::stop_token st) {
                while (!st.stop_requested() && !g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
                server.stop();
            });
            const bool ok = serve_port == 0 ? server.listen_after_bind() : server.listen(serve_host, port);
            watcher.request_stop();
            if (!ok && !g_stop) throw std::runtime_error("cannot listen on " + serve_host + ":" + std::to_string(port));
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
