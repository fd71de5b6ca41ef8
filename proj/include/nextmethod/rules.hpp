#pragma once

#include "nextmethod/ids.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

namespace nextmethod {

struct CommitRecord;

struct Transaction {
    ItemSet items;  // sorted, distinct
    std::string commit_id;
    std::string path;
};

struct AssociationRule {
    ItemSet lhs;
    ClusterId rhs;
    double support = 0.0;
    double confidence = 0.0;
    std::size_t count = 0;      // transactions containing lhs ∪ {rhs}
    std::size_t lhs_count = 0;  // transactions containing lhs

    bool operator==(const AssociationRule&) const = default;
};

/// method id -> cluster id.
using ClusterAssignment = std::unordered_map<MethodId, ClusterId>;

/// One transaction per (commit, file) holding at least two distinct clusters.
/// Methods without an assignment are skipped.
std::vector<Transaction> build_transactions(const std::vector<CommitRecord>& commits,
                                            const ClusterAssignment& assignment);

struct MiningParams {
    double min_support = 0.0;     // fraction of transactions, in (0, 1]
    double min_confidence = 0.0;  // in (0, 1]
    std::size_t max_lhs = 1;      // 1..9
};

inline constexpr std::size_t kMaxLhsCeiling = 9;

/// Smallest transaction count meeting `min_support` over `n` transactions:
/// ceil(min_support * n), guarded against floating-point overshoot.
std::size_t support_floor(double min_support, std::size_t n);

/// True iff count / lhs_count >= min_confidence, with the same guard.
bool meets_confidence(std::size_t count, std::size_t lhs_count, double min_confidence);

/// Level-wise (Apriori) mining of single-RHS rules. Output is sorted by
/// confidence desc, support desc, lhs, rhs. Throws std::invalid_argument on
/// an empty transaction list or out-of-range parameters.
std::vector<AssociationRule> mine_rules(const std::vector<Transaction>& transactions, const MiningParams& params);

/// Deterministic rule ordering used by mine_rules.
bool rule_order(const AssociationRule& a, const AssociationRule& b);

/// Writes one transaction per line as `C12,C8,C71`.
void dump_transactions(std::ostream& out, const std::vector<Transaction>& transactions);

}  // namespace nextmethod
