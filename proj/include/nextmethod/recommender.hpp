#pragma once

#include "nextmethod/ids.hpp"
#include "nextmethod/model.hpp"
#include "nextmethod/rules.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nextmethod {

struct ClusterMatch {
    ClusterId cluster;
    double similarity = 0.0;
};

/// Most similar centroid, if its similarity is strictly above `gamma`. Ties
/// on similarity go to the smallest cluster id.
std::optional<ClusterMatch> assign_cluster(const TermVector& method, const ClusterIndex& index, double gamma);
std::optional<ClusterMatch> assign_cluster(const TermVector& method, const Model& model, double gamma);
std::optional<ClusterMatch> assign_cluster(std::string_view method_source, const Model& model, double gamma);

/// Non-empty subsets of `matched` with at most `cap` elements, ordered by
/// size and then lexicographically.
std::vector<ItemSet> candidate_lhs(const ItemSet& matched, std::size_t cap);

struct RuleSelection {
    /// Drop rules whose RHS is already among the matched clusters. On for
    /// live recommendations, off for replay evaluation.
    bool suppress_existing = true;
    /// Largest candidate LHS; defaults to the number of matched clusters.
    std::optional<std::size_t> lhs_cap;
};

/// Rules that survive matching, suppression, same-RHS deduplication and
/// circular-dependency resolution, as indices into model.rules(), in
/// recommendation order (confidence desc, support desc, lhs, rhs).
std::vector<std::size_t> select_rules(const ItemSet& matched, const Model& model, const RuleSelection& selection = {});

/// True if applying one of the two rules makes the other pointless.
bool rules_conflict(const AssociationRule& a, const AssociationRule& b, const ItemSet& matched);

struct MatchedMethod {
    std::string signature;
    ClusterId cluster;
};

struct Recommendation {
    ClusterId rhs_cluster;
    std::string code;  // centroid source text
    std::vector<std::string> lhs_signatures;
    double confidence = 0.0;
    AssociationRule rule;
    std::string repo_id;
    std::string commit_id;
    std::string path;
};

/// Live recommendation over methods already matched to clusters.
std::vector<Recommendation> recommend(const std::vector<MatchedMethod>& matched, const Model& model);

/// Cluster-only variant; LHS signatures come from the LHS centroids.
std::vector<Recommendation> recommend(const ItemSet& matched, const Model& model);

/// `// Source: ...` line naming where a recommended snippet was taken from.
std::string provenance_comment(const Recommendation& rec);

}  // namespace nextmethod
