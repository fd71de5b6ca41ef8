#include "nextmethod/tuning.hpp"

#include "nextmethod/model.hpp"
#include "nextmethod/rules.hpp"

#include "toml.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace nextmethod {

TuningGrid TuningGrid::defaults() {
    return TuningGrid{
        {0.05, 0.20, 0.35, 0.50, 0.65, 0.80},
        {8.0e-6, 4.8e-5, 8.8e-5, 1.28e-4, 1.68e-4},
        {0.80, 0.85, 0.90, 0.95},
        {1, 2, 3, 4, 5, 6, 7, 8, 9},
    };
}

namespace {

void validate_grid(const TuningGrid& g) {
    if (g.min_confidence.empty() || g.min_support.empty() || g.lambda.empty() || g.max_lhs.empty())
        throw std::invalid_argument("grid: every parameter needs at least one value");
    for (double v : g.min_confidence)
        if (!(v > 0.0 && v <= 1.0)) throw std::invalid_argument("grid: con must lie in (0, 1]");
    for (double v : g.min_support)
        if (!(v > 0.0 && v <= 1.0)) throw std::invalid_argument("grid: sup must lie in (0, 1]");
    for (double v : g.lambda)
        if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("grid: lambda must lie in [0, 1]");
    for (std::size_t v : g.max_lhs)
        if (v < 1 || v > kMaxLhsCeiling) throw std::invalid_argument("grid: max_lhs must lie in 1..9");
}

std::vector<double> numbers(const toml::table& t, const char* key, std::vector<double> fallback) {
    const toml::node* node = t.get(key);
    if (node == nullptr) return fallback;
    const toml::array* arr = node->as_array();
    if (arr == nullptr) throw std::invalid_argument(std::string("grid: '") + key + "' must be an array");
    std::vector<double> out;
    for (const auto& el : *arr) {
        if (auto d = el.value<double>())
            out.push_back(*d);
        else
            throw std::invalid_argument(std::string("grid: '") + key + "' holds a non-number");
    }
    return out;
}

}  // namespace

TuningGrid parse_grid(std::string_view toml_text) {
    toml::table t;
    try {
        t = toml::parse(toml_text);
    } catch (const toml::parse_error& e) {
        std::ostringstream msg;
        msg << "grid: " << e.description() << " at line " << e.source().begin.line;
        throw std::invalid_argument(msg.str());
    }
    const TuningGrid def = TuningGrid::defaults();
    TuningGrid g;
    g.min_confidence = numbers(t, "con", def.min_confidence);
    g.min_support = numbers(t, "sup", def.min_support);
    g.lambda = numbers(t, "lambda", def.lambda);
    std::vector<double> lhs_default(def.max_lhs.begin(), def.max_lhs.end());
    for (double v : numbers(t, "max_lhs", lhs_default)) {
        if (v != static_cast<double>(static_cast<long long>(v)) || v < 1)
            throw std::invalid_argument("grid: max_lhs values must be positive integers");
        g.max_lhs.push_back(static_cast<std::size_t>(v));
    }
    validate_grid(g);
    return g;
}

TuningGrid load_grid(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open grid file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_grid(ss.str());
}

// ---------------------------------------------------------------------------
// Sweep

namespace {

template <typename T>
std::vector<T> sorted_unique(std::vector<T> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

/// Emits results in grid order even when they finish out of order.
class OrderedEmitter {
public:
    OrderedEmitter(std::vector<std::optional<TuningResult>>& slots, const TuningOptions& options)
        : slots_(slots), options_(options) {}

    void put(std::size_t index, TuningResult result) {
        std::lock_guard lock(mu_);
        slots_[index] = std::move(result);
        while (next_ < slots_.size() && slots_[next_]) {
            if (options_.on_result) options_.on_result(*slots_[next_]);
            ++next_;
        }
    }

private:
    std::vector<std::optional<TuningResult>>& slots_;
    const TuningOptions& options_;
    std::mutex mu_;
    std::size_t next_ = 0;
};

}  // namespace

std::vector<TuningResult> tune(const TuningGrid& grid, const std::vector<CommitRecord>& train,
                               const std::vector<CommitRecord>& validation, const TuningOptions& options) {
    validate_grid(grid);
    const auto lambdas = sorted_unique(grid.lambda);
    const auto sups = sorted_unique(grid.min_support);
    const auto lhs_sizes = sorted_unique(grid.max_lhs);
    const auto cons = sorted_unique(grid.min_confidence);
    const std::size_t per_lambda = sups.size() * lhs_sizes.size() * cons.size();

    std::vector<MethodRecord> methods;
    for (const auto& c : train) methods.insert(methods.end(), c.added_methods.begin(), c.added_methods.end());
    const unsigned workers = std::max(1u, options.workers);
    const SimilarityGraph base =
        build_graph(std::span<const MethodRecord>(methods), lambdas.front(), options.edge_threshold, workers);

    std::vector<std::optional<TuningResult>> slots(lambdas.size() * per_lambda);
    OrderedEmitter emitter(slots, options);

    for (std::size_t li = 0; li < lambdas.size(); ++li) {
        const double lambda = lambdas[li];
        const SimilarityGraph graph = li == 0 ? base : prune_graph(base, lambda, options.edge_threshold);
        const ClusteredTraining clustered =
            cluster_training(train, graph, lambda, ClusterOptions{options.edge_threshold, false, workers});

        std::vector<AssignedCommit> assigned;
        assigned.reserve(validation.size());
        for (const auto& c : validation) assigned.push_back(assign_commit(c, *clustered.index, lambda));

        const std::size_t jobs = sups.size() * lhs_sizes.size();
        std::atomic<std::size_t> next{0};
        std::mutex error_mu;
        std::exception_ptr error;

        auto run = [&] {
            for (std::size_t job = next++; job < jobs; job = next++) {
                try {
                    const std::size_t si = job / lhs_sizes.size();
                    const std::size_t mi = job % lhs_sizes.size();
                    std::vector<AssociationRule> mined;
                    if (!clustered.transactions.empty())
                        mined = mine_rules(clustered.transactions, MiningParams{sups[si], cons.front(), lhs_sizes[mi]});
                    for (std::size_t ci = 0; ci < cons.size(); ++ci) {
                        std::vector<AssociationRule> rules;
                        for (const auto& r : mined)
                            if (meets_confidence(r.count, r.lhs_count, cons[ci])) rules.push_back(r);

                        ModelConfig cfg;
                        cfg.lambda = lambda;
                        cfg.gamma = lambda;
                        cfg.min_support = sups[si];
                        cfg.min_confidence = cons[ci];
                        cfg.max_lhs = lhs_sizes[mi];
                        cfg.edge_threshold = options.edge_threshold;
                        cfg.training_commits = clustered.commits;
                        cfg.training_transactions = clustered.transactions.size();
                        const Model model(cfg, clustered.index, std::move(rules));

                        std::vector<CommitOutcome> outcomes;
                        outcomes.reserve(assigned.size());
                        for (const auto& a : assigned) outcomes.push_back(replay_commit(a, model));

                        TuningResult result;
                        result.config = TuningConfig{cons[ci], sups[si], lambda, lhs_sizes[mi]};
                        result.clusters = model.clusters().size();
                        result.rules = model.rules().size();
                        result.report = compute_metrics(outcomes);
                        emitter.put(li * per_lambda + (si * lhs_sizes.size() + mi) * cons.size() + ci,
                                    std::move(result));
                    }
                } catch (...) {
                    std::lock_guard lock(error_mu);
                    if (!error) error = std::current_exception();
                    next = jobs;
                }
            }
        };
        {
            std::vector<std::jthread> pool;
            for (unsigned w = 1; w < std::min<std::size_t>(workers, jobs); ++w) pool.emplace_back(run);
            run();
        }
        if (error) std::rethrow_exception(error);
    }

    std::vector<TuningResult> out;
    out.reserve(slots.size());
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

// ---------------------------------------------------------------------------
// Results CSV

namespace {

constexpr std::array<const char*, 6> kConfigColumns{"con", "sup", "lambda", "max_lhs", "clusters", "rules"};

std::string exact(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string exact_opt(const std::optional<double>& v) { return v ? exact(*v) : std::string("n/a"); }

std::string triple(const Quartiles& q) {
    if (!q.q1) return "n/a";
    return exact(*q.q1) + "," + exact(*q.q2) + "," + exact(*q.q3);
}

std::string quote(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    if (quoted) throw std::invalid_argument("results line " + std::to_string(line_no) + ": unterminated quote");
    fields.push_back(std::move(cur));
    return fields;
}

std::vector<std::string> report_labels() {
    std::vector<std::string> labels;
    for (auto& [label, value] : report_rows(EvalReport{})) labels.push_back(label);
    return labels;
}

std::vector<std::string> report_values(const EvalReport& r) {
    return {
        std::to_string(r.commits),
        std::to_string(r.added_methods),
        std::to_string(r.commits_with_recommendation),
        std::to_string(r.commits_with_correct),
        std::to_string(r.recommendations),
        std::to_string(r.correct_recommendations),
        exact_opt(r.recall),
        exact_opt(r.precision),
        exact_opt(r.coverage_commits),
        exact_opt(r.coverage_methods),
        exact_opt(r.recom_median),
        exact_opt(r.recom_mean),
        triple(r.distance_tokens),
        exact_opt(r.distance_tokens.mean),
        triple(r.distance_pct),
        exact_opt(r.distance_pct.mean),
    };
}

double to_double(const std::string& s, std::size_t line_no) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw std::invalid_argument("results line " + std::to_string(line_no) + ": '" + s + "' is not a number");
}

std::size_t to_count(const std::string& s, std::size_t line_no) {
    const double v = to_double(s, line_no);
    if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v)))
        throw std::invalid_argument("results line " + std::to_string(line_no) + ": '" + s + "' is not a count");
    return static_cast<std::size_t>(v);
}

std::optional<double> to_opt(const std::string& s, std::size_t line_no) {
    if (s == "n/a" || s.empty()) return std::nullopt;
    return to_double(s, line_no);
}

Quartiles to_triple(const std::string& s, std::size_t line_no) {
    Quartiles q;
    if (s == "n/a" || s.empty()) return q;
    const auto parts = split_csv_line(s, line_no);
    if (parts.size() != 3) throw std::invalid_argument("results line " + std::to_string(line_no) + ": bad quartiles");
    q.q1 = to_double(parts[0], line_no);
    q.q2 = to_double(parts[1], line_no);
    q.q3 = to_double(parts[2], line_no);
    return q;
}

}  // namespace

void write_results_header(std::ostream& out) {
    std::string line;
    for (const char* c : kConfigColumns) line += std::string(c) + ",";
    const auto labels = report_labels();
    for (std::size_t i = 0; i < labels.size(); ++i) line += (i ? "," : "") + quote(labels[i]);
    out << line << '\n';
}

void write_result_row(std::ostream& out, const TuningResult& r) {
    std::string line = exact(r.config.min_confidence) + "," + exact(r.config.min_support) + "," +
                       exact(r.config.lambda) + "," + std::to_string(r.config.max_lhs) + "," +
                       std::to_string(r.clusters) + "," + std::to_string(r.rules);
    for (const auto& v : report_values(r.report)) line += "," + quote(v);
    out << line << '\n';
}

void write_results(std::ostream& out, const std::vector<TuningResult>& results) {
    write_results_header(out);
    for (const auto& r : results) write_result_row(out, r);
}

std::vector<TuningResult> read_results(std::istream& in) {
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line)) throw std::invalid_argument("results: empty file");
    const auto header = split_csv_line(line, line_no);
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
    std::vector<std::string> needed(kConfigColumns.begin(), kConfigColumns.end());
    for (const auto& l : report_labels()) needed.push_back(l);
    for (const auto& n : needed)
        if (!col.contains(n)) throw std::invalid_argument("results: missing column '" + n + "'");

    std::vector<TuningResult> out;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto f = split_csv_line(line, line_no);
        if (f.size() != header.size())
            throw std::invalid_argument("results line " + std::to_string(line_no) + ": expected " +
                                        std::to_string(header.size()) + " fields, got " + std::to_string(f.size()));
        auto get = [&](const std::string& name) -> const std::string& { return f[col.at(name)]; };
        TuningResult r;
        r.config.min_confidence = to_double(get("con"), line_no);
        r.config.min_support = to_double(get("sup"), line_no);
        r.config.lambda = to_double(get("lambda"), line_no);
        r.config.max_lhs = to_count(get("max_lhs"), line_no);
        r.clusters = to_count(get("clusters"), line_no);
        r.rules = to_count(get("rules"), line_no);
        EvalReport& e = r.report;
        e.commits = to_count(get("#commits"), line_no);
        e.added_methods = to_count(get("#added methods"), line_no);
        e.commits_with_recommendation = to_count(get("#commits w. recomm."), line_no);
        e.commits_with_correct = to_count(get("#commits w. corr. recomm."), line_no);
        e.recommendations = to_count(get("#recommendations"), line_no);
        e.correct_recommendations = to_count(get("#corr. recomm."), line_no);
        e.recall = to_opt(get("recall"), line_no);
        e.precision = to_opt(get("precision"), line_no);
        e.coverage_commits = to_opt(get("coverage_commits"), line_no);
        e.coverage_methods = to_opt(get("coverage_meth"), line_no);
        e.recom_median = to_opt(get("#recom(median)"), line_no);
        e.recom_mean = to_opt(get("#recom(mean)"), line_no);
        e.distance_tokens = to_triple(get("distance_tokens(Q1,Q2,Q3)"), line_no);
        e.distance_tokens.mean = to_opt(get("distance_tokens(mean)"), line_no);
        e.distance_pct = to_triple(get("%distance_tokens(Q1,Q2,Q3)"), line_no);
        e.distance_pct.mean = to_opt(get("%distance_tokens(mean)"), line_no);
        out.push_back(std::move(r));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Presets

std::string to_string(Sensitivity level) {
    switch (level) {
        case Sensitivity::high: return "high";
        case Sensitivity::medium: return "medium";
        case Sensitivity::low: return "low";
    }
    return "?";
}

Sensitivity parse_sensitivity(std::string_view text) {
    if (text == "high") return Sensitivity::high;
    if (text == "medium") return Sensitivity::medium;
    if (text == "low") return Sensitivity::low;
    throw std::invalid_argument("unknown sensitivity '" + std::string(text) + "' (expected high, medium or low)");
}

std::array<PresetChoice, 3> select_presets(const std::vector<TuningResult>& results) {
    if (results.empty()) throw std::invalid_argument("select_presets: no tuning results");
    constexpr std::array<Sensitivity, 3> levels{Sensitivity::high, Sensitivity::medium, Sensitivity::low};
    std::array<PresetChoice, 3> out;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        out[i].level = levels[i];
        out[i].precision_floor = kPrecisionFloors[i];
        const TuningResult* best = nullptr;
        for (const auto& r : results) {
            const auto& p = r.report.precision;
            const auto& cov = r.report.coverage_commits;
            if (!p || !cov || *p < kPrecisionFloors[i]) continue;
            if (best == nullptr) {
                best = &r;
                continue;
            }
            const double bc = *best->report.coverage_commits;
            const double bp = *best->report.precision;
            if (*cov > bc || (*cov == bc && (*p > bp || (*p == bp && r.config < best->config)))) best = &r;
        }
        if (best) out[i].choice = *best;
    }
    return out;
}

}  // namespace nextmethod
