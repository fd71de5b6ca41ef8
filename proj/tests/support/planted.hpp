#pragma once

#include "nextmethod/corpus.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace nextmethod::testing {

/// One planted implementation pattern: whenever `lhs` is added, `rhs` is
/// added in the same file. `rhs` also shows up alone among noise methods,
/// which keeps the reverse rule below any confidence floor above
/// train_planted / (train_planted + train_rhs_alone).
struct PlantedPattern {
    std::string lhs_signature;
    std::string rhs_signature;
};

struct PlantedOptions {
    std::size_t train_planted = 12;      // per pattern
    std::size_t train_rhs_alone = 3;     // per pattern
    std::size_t train_noise = 30;
    std::size_t validation_planted = 2;  // per pattern
    std::size_t validation_noise = 4;
    std::size_t test_planted = 2;        // per pattern
    std::size_t test_noise = 4;
    std::uint64_t seed = 20240611;
};

struct PlantedCorpus {
    std::vector<CommitRecord> commits;  // raw, ascending timestamp
    std::vector<PlantedPattern> patterns;
    PlantedOptions options;

    /// Transactions the training block yields: one per retained training commit.
    std::size_t train_transactions() const;
    std::size_t planted_commits(std::size_t per_pattern) const { return patterns.size() * per_pattern; }
};

/// Deterministic corpus for the given options. Timestamps are laid out so
/// that the default 0.8/0.1/0.1 split puts exactly the train_* commits in
/// training, the validation_* ones in validation and the test_* ones in test.
/// Two more training commits (1 and 11 added methods) fall to the filter.
PlantedCorpus make_planted_corpus(const PlantedOptions& options = {});

/// Source of pattern `k`'s LHS or RHS method with its variable literal set to `marker`.
std::string planted_method(std::size_t pattern, bool rhs, const std::string& marker);

/// Wraps method declarations into a compilable-looking Java class.
std::string java_class(const std::string& package, const std::string& name, const std::vector<std::string>& methods);

}  // namespace nextmethod::testing
