#pragma once

#include "nextmethod/corpus.hpp"
#include "nextmethod/ids.hpp"
#include "nextmethod/model.hpp"
#include "nextmethod/similarity.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nextmethod {

// ---------------------------------------------------------------------------
// Time-based split

struct SplitConfig {
    double train = 0.8;
    double validation = 0.1;
    double test = 0.1;
};

/// Parses "0.8,0.1,0.1". Throws std::invalid_argument unless three
/// non-negative fractions summing to 1 are given.
SplitConfig parse_split(const std::string& text);

struct TimeSplit {
    std::vector<CommitRecord> train;
    std::vector<CommitRecord> validation;
    std::vector<CommitRecord> test;
    std::int64_t first_timestamp = 0;
    std::int64_t last_timestamp = 0;
    double train_end = 0.0;       // commits before this instant train
    double validation_end = 0.0;  // then validation; the rest is test
};

/// Splits on the global time axis [first, last] across all repositories. A
/// boundary instant belongs to the later block. A corpus whose commits all
/// share one timestamp goes entirely to training. Throws on empty input.
TimeSplit time_split(std::vector<CommitRecord> commits, const SplitConfig& cfg = {});

// ---------------------------------------------------------------------------
// Replay

/// A commit with its added methods assigned to clusters of one clustering.
struct AssignedCommit {
    const CommitRecord* commit = nullptr;
    std::vector<std::optional<ClusterId>> clusters;  // parallel to commit->added_methods
    std::vector<TokenSequence> tokens;               // parallel to commit->added_methods
};

AssignedCommit assign_commit(const CommitRecord& commit, const ClusterIndex& index, double gamma);

struct RecommendationOutcome {
    ClusterId rhs;
    double confidence = 0.0;
    bool correct = false;
    int centroid_line_count = 0;
    std::optional<std::size_t> consumed_method;  // index into the commit's added methods
    std::optional<TokenDistance> distance;       // set when consumed_method is
};

struct CommitOutcome {
    std::string commit_id;
    std::size_t n_added = 0;
    std::size_t n_matched = 0;  // methods assigned to a cluster
    std::vector<RecommendationOutcome> recommendations;
    std::vector<int> added_line_counts;

    std::size_t n_recommendations() const { return recommendations.size(); }
    std::size_t n_correct() const;
    std::size_t covered_methods() const;
};

/// Replays one commit: every matched subset smaller than the matched set (and
/// no larger than max_LHS) is tried as an LHS, without live suppression.
CommitOutcome replay_commit(const AssignedCommit& assigned, const Model& model);

/// assign_commit with the model's gamma, then replay_commit.
CommitOutcome simulate_commit(const CommitRecord& commit, const Model& model);

std::vector<CommitOutcome> simulate_commits(const std::vector<CommitRecord>& commits, const Model& model);

// ---------------------------------------------------------------------------
// Metrics

struct Quartiles {
    std::optional<double> q1, q2, q3, mean;
};

/// Q1/Q2/Q3 with lower interpolation (value at floor(p * (n - 1)) of the
/// sorted sample) and the arithmetic mean. Empty input leaves all unset.
Quartiles summarize(std::vector<double> values);

struct EvalReport {
    std::size_t commits = 0;
    std::size_t added_methods = 0;
    std::size_t commits_with_recommendation = 0;
    std::size_t commits_with_correct = 0;
    std::size_t recommendations = 0;
    std::size_t correct_recommendations = 0;
    std::size_t covered_methods = 0;

    // Unset when the denominator is zero.
    std::optional<double> recall;
    std::optional<double> precision;
    std::optional<double> coverage_commits;
    std::optional<double> coverage_methods;
    std::optional<double> recom_median;
    std::optional<double> recom_mean;
    Quartiles distance_tokens;
    Quartiles distance_pct;
};

EvalReport compute_metrics(const std::vector<CommitOutcome>& outcomes, std::size_t total_added_methods);

/// compute_metrics with the added-method total taken from the outcomes.
EvalReport compute_metrics(const std::vector<CommitOutcome>& outcomes);

inline constexpr int kLongMethodLines = 4;

/// Recomputes metrics counting only recommendations whose centroid has at
/// least `min_lines` lines; commits without any added method of that length
/// leave the analysis, and only such methods count as added methods.
EvalReport long_method_reanalysis(const std::vector<CommitOutcome>& outcomes, int min_lines = kLongMethodLines);

/// Table row labels, in display order, paired with formatted values.
std::vector<std::pair<std::string, std::string>> report_rows(const EvalReport& report);

}  // namespace nextmethod
