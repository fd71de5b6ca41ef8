#include "nextmethod/recommender.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace nextmethod {

std::optional<ClusterMatch> assign_cluster(const TermVector& method, const ClusterIndex& index, double gamma) {
    std::optional<ClusterMatch> best;
    auto consider = [&](ClusterId id) {
        const double s = similarity(method, index.centroid_terms(id));
        if (!best || s > best->similarity) best = ClusterMatch{id, s};
    };
    // Centroids without a shared term score 0 and can never beat gamma >= 0.
    // Candidates come in ascending id order, so ties keep the smallest id.
    if (gamma >= 0.0) {
        for (ClusterId id : index.centroid_candidates(method)) consider(id);
    } else {
        for (const auto& c : index.clusters()) consider(c.cluster_id);
    }
    if (best && best->similarity > gamma) return best;
    return std::nullopt;
}

std::optional<ClusterMatch> assign_cluster(const TermVector& method, const Model& model, double gamma) {
    return assign_cluster(method, model.index(), gamma);
}

std::optional<ClusterMatch> assign_cluster(std::string_view method_source, const Model& model, double gamma) {
    return assign_cluster(method_terms(method_source), model, gamma);
}

std::vector<ItemSet> candidate_lhs(const ItemSet& matched, std::size_t cap) {
    std::vector<ItemSet> out;
    const std::size_t n = matched.size();
    cap = std::min(cap, n);
    std::vector<std::size_t> idx;
    for (std::size_t k = 1; k <= cap; ++k) {
        idx.resize(k);
        for (std::size_t i = 0; i < k; ++i) idx[i] = i;
        while (true) {
            ItemSet s;
            s.reserve(k);
            for (std::size_t i : idx) s.push_back(matched[i]);
            out.push_back(std::move(s));
            std::size_t pos = k;
            while (pos > 0 && idx[pos - 1] == n - k + pos - 1) --pos;
            if (pos == 0) break;
            ++idx[pos - 1];
            for (std::size_t i = pos; i < k; ++i) idx[i] = idx[i - 1] + 1;
        }
    }
    return out;
}

bool rules_conflict(const AssociationRule& a, const AssociationRule& b, const ItemSet& matched) {
    auto one_way = [&](const AssociationRule& r1, const AssociationRule& r2) {
        return contains(r2.lhs, r1.rhs) && (contains(r1.lhs, r2.rhs) || contains(matched, r2.rhs));
    };
    return one_way(a, b) || one_way(b, a);
}

namespace {

std::uint64_t subset_count(std::size_t n, std::size_t cap) {
    std::uint64_t total = 0;
    std::uint64_t binom = 1;
    for (std::size_t k = 1; k <= std::min(cap, n); ++k) {
        binom = binom * (n - k + 1) / k;
        total += binom;
        if (total > (1ULL << 40)) break;
    }
    return total;
}

}  // namespace

std::vector<std::size_t> select_rules(const ItemSet& matched, const Model& model, const RuleSelection& selection) {
    const auto& rules = model.rules();
    const std::size_t cap = std::min(selection.lhs_cap.value_or(matched.size()), matched.size());

    // (1) rules whose LHS equals a candidate subset. Enumerating subsets and
    // scanning rules for LHS ⊆ matched select the same set; use the cheaper one.
    std::vector<std::size_t> hits;
    if (cap > 0) {
        if (subset_count(matched.size(), cap) <= rules.size()) {
            for (const auto& lhs : candidate_lhs(matched, cap)) {
                if (const auto* idx = model.rules_with_lhs(lhs)) hits.insert(hits.end(), idx->begin(), idx->end());
            }
        } else {
            for (std::size_t i = 0; i < rules.size(); ++i) {
                const auto& lhs = rules[i].lhs;
                if (lhs.size() <= cap && std::includes(matched.begin(), matched.end(), lhs.begin(), lhs.end()))
                    hits.push_back(i);
            }
        }
    }

    // (2) live suppression.
    if (selection.suppress_existing)
        std::erase_if(hits, [&](std::size_t i) { return contains(matched, rules[i].rhs); });

    auto better = [&](std::size_t a, std::size_t b) {
        const auto& ra = rules[a];
        const auto& rb = rules[b];
        if (ra.confidence != rb.confidence) return ra.confidence > rb.confidence;
        if (ra.support != rb.support) return ra.support > rb.support;
        return std::tie(ra.lhs, ra.rhs) < std::tie(rb.lhs, rb.rhs);
    };

    // (3) one rule per RHS, the best one.
    std::map<ClusterId, std::size_t> by_rhs;
    for (std::size_t i : hits) {
        auto [it, inserted] = by_rhs.emplace(rules[i].rhs, i);
        if (!inserted && better(i, it->second)) it->second = i;
    }
    std::vector<std::size_t> survivors;
    for (const auto& [rhs, i] : by_rhs) survivors.push_back(i);
    std::sort(survivors.begin(), survivors.end(), better);

    // (4) circular dependencies: keep the better rule of each conflicting pair.
    std::vector<std::size_t> kept;
    for (std::size_t i : survivors) {
        const bool clash = std::any_of(kept.begin(), kept.end(),
                                       [&](std::size_t k) { return rules_conflict(rules[i], rules[k], matched); });
        if (!clash) kept.push_back(i);
    }
    // (5) already in confidence order.
    return kept;
}

namespace {

Recommendation make_recommendation(const AssociationRule& rule, const Model& model,
                                   std::vector<std::string> lhs_signatures) {
    const auto& src = model.centroid(rule.rhs);
    Recommendation rec;
    rec.rhs_cluster = rule.rhs;
    rec.code = src.source_text;
    rec.lhs_signatures = std::move(lhs_signatures);
    rec.confidence = rule.confidence;
    rec.rule = rule;
    rec.repo_id = src.repo_id;
    rec.commit_id = src.commit_id;
    rec.path = src.path;
    return rec;
}

}  // namespace

std::vector<Recommendation> recommend(const std::vector<MatchedMethod>& matched, const Model& model) {
    ItemSet clusters;
    for (const auto& m : matched) clusters.push_back(m.cluster);
    normalize(clusters);
    std::vector<Recommendation> out;
    for (std::size_t i : select_rules(clusters, model, RuleSelection{true, model.config().max_lhs})) {
        const auto& rule = model.rules()[i];
        std::vector<std::string> sigs;
        for (const auto& m : matched) {
            if (contains(rule.lhs, m.cluster) && std::find(sigs.begin(), sigs.end(), m.signature) == sigs.end())
                sigs.push_back(m.signature);
        }
        out.push_back(make_recommendation(rule, model, std::move(sigs)));
    }
    return out;
}

std::vector<Recommendation> recommend(const ItemSet& matched, const Model& model) {
    ItemSet clusters = matched;
    normalize(clusters);
    std::vector<Recommendation> out;
    for (std::size_t i : select_rules(clusters, model, RuleSelection{true, model.config().max_lhs})) {
        const auto& rule = model.rules()[i];
        std::vector<std::string> sigs;
        for (ClusterId c : rule.lhs) sigs.push_back(model.centroid(c).signature);
        out.push_back(make_recommendation(rule, model, std::move(sigs)));
    }
    return out;
}

std::string provenance_comment(const Recommendation& rec) {
    return "// Source: " + rec.repo_id + " (commit " + rec.commit_id + ", " + rec.path + ")";
}

}  // namespace nextmethod
