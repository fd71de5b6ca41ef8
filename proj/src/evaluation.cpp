#include "nextmethod/evaluation.hpp"

#include "nextmethod/recommender.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace nextmethod {

SplitConfig parse_split(const std::string& text) {
    std::vector<double> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("split: '" + item + "' is not a number");
        }
        if (used != item.size() || !(v >= 0.0)) throw std::invalid_argument("split: bad fraction '" + item + "'");
        parts.push_back(v);
    }
    if (parts.size() != 3) throw std::invalid_argument("split: expected three fractions, got " + std::to_string(parts.size()));
    const double sum = parts[0] + parts[1] + parts[2];
    if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("split: fractions must sum to 1");
    return SplitConfig{parts[0], parts[1], parts[2]};
}

TimeSplit time_split(std::vector<CommitRecord> commits, const SplitConfig& cfg) {
    if (commits.empty()) throw std::invalid_argument("time_split: empty corpus");
    TimeSplit out;
    const auto [lo, hi] = std::minmax_element(commits.begin(), commits.end(),
                                              [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; });
    out.first_timestamp = lo->timestamp;
    out.last_timestamp = hi->timestamp;
    const double ds = static_cast<double>(out.first_timestamp);
    const double span = static_cast<double>(out.last_timestamp - out.first_timestamp);
    out.train_end = ds + cfg.train * span;
    out.validation_end = ds + (cfg.train + cfg.validation) * span;

    for (auto& c : commits) {
        const double t = static_cast<double>(c.timestamp);
        if (span == 0.0 || t < out.train_end)
            out.train.push_back(std::move(c));
        else if (t < out.validation_end)
            out.validation.push_back(std::move(c));
        else
            out.test.push_back(std::move(c));
    }
    return out;
}

AssignedCommit assign_commit(const CommitRecord& commit, const ClusterIndex& index, double gamma) {
    AssignedCommit out;
    out.commit = &commit;
    out.clusters.reserve(commit.added_methods.size());
    out.tokens.reserve(commit.added_methods.size());
    for (const auto& m : commit.added_methods) {
        TokenSequence tokens = tokenize(m.source_text);
        const auto match = assign_cluster(term_vector(tokens), index, gamma);
        out.clusters.push_back(match ? std::optional<ClusterId>(match->cluster) : std::nullopt);
        out.tokens.push_back(std::move(tokens));
    }
    return out;
}

std::size_t CommitOutcome::n_correct() const {
    return static_cast<std::size_t>(
        std::count_if(recommendations.begin(), recommendations.end(), [](const auto& r) { return r.correct; }));
}

std::size_t CommitOutcome::covered_methods() const {
    return static_cast<std::size_t>(std::count_if(recommendations.begin(), recommendations.end(),
                                                  [](const auto& r) { return r.consumed_method.has_value(); }));
}

CommitOutcome replay_commit(const AssignedCommit& assigned, const Model& model) {
    if (assigned.commit == nullptr) throw std::invalid_argument("replay_commit: no commit");
    const CommitRecord& commit = *assigned.commit;
    CommitOutcome out;
    out.commit_id = commit.commit_id;
    out.n_added = commit.added_methods.size();
    for (const auto& m : commit.added_methods) out.added_line_counts.push_back(m.line_count);

    ItemSet matched;
    for (const auto& c : assigned.clusters) {
        if (c) {
            ++out.n_matched;
            matched.push_back(*c);
        }
    }
    normalize(matched);
    if (matched.size() < 2) return out;

    const std::size_t cap = std::min(matched.size() - 1, model.config().max_lhs);
    std::vector<bool> consumed(assigned.clusters.size(), false);
    for (std::size_t i : select_rules(matched, model, RuleSelection{false, cap})) {
        const auto& rule = model.rules()[i];
        RecommendationOutcome rec;
        rec.rhs = rule.rhs;
        rec.confidence = rule.confidence;
        rec.centroid_line_count = model.centroid(rule.rhs).line_count;
        rec.correct = contains(matched, rule.rhs) && !contains(rule.lhs, rule.rhs);
        if (rec.correct) {
            for (std::size_t m = 0; m < assigned.clusters.size(); ++m) {
                if (!consumed[m] && assigned.clusters[m] == rule.rhs) {
                    consumed[m] = true;
                    rec.consumed_method = m;
                    if (!assigned.tokens[m].empty())
                        rec.distance = token_distance(assigned.tokens[m], model.centroid_tokens(rule.rhs));
                    break;
                }
            }
        }
        out.recommendations.push_back(rec);
    }
    return out;
}

CommitOutcome simulate_commit(const CommitRecord& commit, const Model& model) {
    return replay_commit(assign_commit(commit, model.index(), model.config().gamma), model);
}

std::vector<CommitOutcome> simulate_commits(const std::vector<CommitRecord>& commits, const Model& model) {
    std::vector<CommitOutcome> out;
    out.reserve(commits.size());
    for (const auto& c : commits) out.push_back(simulate_commit(c, model));
    return out;
}

Quartiles summarize(std::vector<double> values) {
    Quartiles q;
    if (values.empty()) return q;
    std::sort(values.begin(), values.end());
    auto at = [&](double p) {
        return values[static_cast<std::size_t>(std::floor(p * static_cast<double>(values.size() - 1)))];
    };
    q.q1 = at(0.25);
    q.q2 = at(0.50);
    q.q3 = at(0.75);
    q.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    return q;
}

namespace {

std::optional<double> ratio(std::size_t num, std::size_t den) {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

EvalReport compute_metrics(const std::vector<CommitOutcome>& outcomes, std::size_t total_added_methods) {
    EvalReport r;
    r.commits = outcomes.size();
    r.added_methods = total_added_methods;
    std::vector<double> per_commit;
    std::vector<double> dist;
    std::vector<double> pct;
    for (const auto& o : outcomes) {
        const std::size_t n_rec = o.n_recommendations();
        const std::size_t n_cor = o.n_correct();
        if (n_rec > 0) {
            ++r.commits_with_recommendation;
            per_commit.push_back(static_cast<double>(n_rec));
        }
        if (n_cor > 0) ++r.commits_with_correct;
        r.recommendations += n_rec;
        r.correct_recommendations += n_cor;
        r.covered_methods += o.covered_methods();
        for (const auto& rec : o.recommendations) {
            if (rec.correct && rec.distance) {
                dist.push_back(static_cast<double>(rec.distance->count));
                pct.push_back(static_cast<double>(rec.distance->pct));
            }
        }
    }
    r.recall = ratio(r.commits_with_correct, r.commits);
    r.precision = ratio(r.commits_with_correct, r.commits_with_recommendation);
    r.coverage_commits = ratio(r.commits_with_recommendation, r.commits);
    r.coverage_methods = ratio(r.covered_methods, r.added_methods);
    const Quartiles recom = summarize(per_commit);
    r.recom_median = recom.q2;
    r.recom_mean = recom.mean;
    r.distance_tokens = summarize(std::move(dist));
    r.distance_pct = summarize(std::move(pct));
    return r;
}

EvalReport compute_metrics(const std::vector<CommitOutcome>& outcomes) {
    std::size_t total = 0;
    for (const auto& o : outcomes) total += o.n_added;
    return compute_metrics(outcomes, total);
}

EvalReport long_method_reanalysis(const std::vector<CommitOutcome>& outcomes, int min_lines) {
    std::vector<CommitOutcome> kept;
    std::size_t long_methods = 0;
    for (const auto& o : outcomes) {
        const auto n_long = static_cast<std::size_t>(std::count_if(
            o.added_line_counts.begin(), o.added_line_counts.end(), [&](int n) { return n >= min_lines; }));
        if (n_long == 0) continue;
        long_methods += n_long;
        CommitOutcome c = o;
        std::erase_if(c.recommendations, [&](const RecommendationOutcome& r) { return r.centroid_line_count < min_lines; });
        // Covered methods only count among the long ones.
        for (auto& r : c.recommendations) {
            if (r.consumed_method && *r.consumed_method < c.added_line_counts.size() &&
                c.added_line_counts[*r.consumed_method] < min_lines)
                r.consumed_method.reset();
        }
        kept.push_back(std::move(c));
    }
    return compute_metrics(kept, long_methods);
}

namespace {

std::string fmt(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string fmt_opt(const std::optional<double>& v, int digits) { return v ? fmt(*v, digits) : std::string("n/a"); }

std::string fmt_triple(const Quartiles& q) {
    if (!q.q1) return "n/a";
    return fmt(*q.q1, 0) + "," + fmt(*q.q2, 0) + "," + fmt(*q.q3, 0);
}

}  // namespace

std::vector<std::pair<std::string, std::string>> report_rows(const EvalReport& r) {
    return {
        {"#commits", std::to_string(r.commits)},
        {"#added methods", std::to_string(r.added_methods)},
        {"#commits w. recomm.", std::to_string(r.commits_with_recommendation)},
        {"#commits w. corr. recomm.", std::to_string(r.commits_with_correct)},
        {"#recommendations", std::to_string(r.recommendations)},
        {"#corr. recomm.", std::to_string(r.correct_recommendations)},
        {"recall", fmt_opt(r.recall, 4)},
        {"precision", fmt_opt(r.precision, 4)},
        {"coverage_commits", fmt_opt(r.coverage_commits, 4)},
        {"coverage_meth", fmt_opt(r.coverage_methods, 4)},
        {"#recom(median)", fmt_opt(r.recom_median, 0)},
        {"#recom(mean)", fmt_opt(r.recom_mean, 2)},
        {"distance_tokens(Q1,Q2,Q3)", fmt_triple(r.distance_tokens)},
        {"distance_tokens(mean)", fmt_opt(r.distance_tokens.mean, 2)},
        {"%distance_tokens(Q1,Q2,Q3)", fmt_triple(r.distance_pct)},
        {"%distance_tokens(mean)", fmt_opt(r.distance_pct.mean, 2)},
    };
}

}  // namespace nextmethod
