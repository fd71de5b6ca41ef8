#include "nextmethod/rules.hpp"
#include "nextmethod/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <tuple>
#include <unordered_set>

namespace nextmethod {

void normalize(ItemSet& items) {
    std::sort(items.begin(), items.end());
    items.erase(std::unique(items.begin(), items.end()), items.end());
}

ItemSet make_itemset(std::vector<ClusterId> items) {
    normalize(items);
    return items;
}

bool contains(const ItemSet& items, ClusterId id) { return std::binary_search(items.begin(), items.end(), id); }

std::vector<Transaction> build_transactions(const std::vector<CommitRecord>& commits,
                                            const ClusterAssignment& assignment) {
    std::vector<Transaction> out;
    for (const auto& commit : commits) {
        // Group by file, keeping first-seen file order.
        std::vector<Transaction> per_file;
        for (const auto& m : commit.added_methods) {
            auto it = assignment.find(m.method_id);
            if (it == assignment.end()) continue;
            auto file = std::find_if(per_file.begin(), per_file.end(),
                                     [&](const Transaction& t) { return t.path == m.path; });
            if (file == per_file.end()) {
                per_file.push_back(Transaction{{}, commit.commit_id, m.path});
                file = std::prev(per_file.end());
            }
            file->items.push_back(it->second);
        }
        for (auto& t : per_file) {
            normalize(t.items);
            if (t.items.size() >= 2) out.push_back(std::move(t));
        }
    }
    return out;
}

std::size_t support_floor(double min_support, std::size_t n) {
    const double exact = min_support * static_cast<double>(n);
    const auto floor = static_cast<std::size_t>(std::ceil(exact - 1e-9 * std::max(1.0, exact)));
    return std::max<std::size_t>(1, floor);
}

bool meets_confidence(std::size_t count, std::size_t lhs_count, double min_confidence) {
    if (lhs_count == 0) return false;
    return static_cast<double>(count) >= min_confidence * static_cast<double>(lhs_count) - 1e-9;
}

bool rule_order(const AssociationRule& a, const AssociationRule& b) {
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    if (a.support != b.support) return a.support > b.support;
    return std::tie(a.lhs, a.rhs) < std::tie(b.lhs, b.rhs);
}

namespace {

struct ItemSetHash {
    std::size_t operator()(const ItemSet& s) const noexcept {
        std::size_t h = 1469598103934665603ULL;
        for (ClusterId c : s) h = (h ^ c.value) * 1099511628211ULL;
        return h;
    }
};

using CountTable = std::unordered_map<ItemSet, std::size_t, ItemSetHash>;

// Candidates of size k+1 from frequent k-itemsets sharing a (k-1)-prefix,
// dropping any whose k-subsets are not all frequent.
std::vector<ItemSet> next_candidates(const std::vector<ItemSet>& frequent, const CountTable& frequent_counts) {
    std::vector<ItemSet> out;
    for (std::size_t i = 0; i < frequent.size(); ++i) {
        for (std::size_t j = i + 1; j < frequent.size(); ++j) {
            const ItemSet& a = frequent[i];
            const ItemSet& b = frequent[j];
            if (!std::equal(a.begin(), a.end() - 1, b.begin())) break;  // sorted: prefix groups are contiguous
            ItemSet cand = a;
            cand.push_back(b.back());
            bool all_frequent = true;
            ItemSet sub;
            for (std::size_t drop = 0; drop + 2 < cand.size() && all_frequent; ++drop) {
                sub.assign(cand.begin(), cand.end());
                sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(drop));
                all_frequent = frequent_counts.contains(sub);
            }
            if (all_frequent) out.push_back(std::move(cand));
        }
    }
    return out;
}

std::uint64_t binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    std::uint64_t r = 1;
    for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

void count_candidates(const std::vector<Transaction>& transactions, std::size_t k, CountTable& candidates) {
    ItemSet subset(k);
    std::vector<std::size_t> idx(k);
    for (const auto& t : transactions) {
        const auto& items = t.items;
        if (items.size() < k) continue;
        if (binomial(items.size(), k) <= candidates.size()) {
            // Enumerate k-subsets of the transaction in lexicographic order.
            for (std::size_t i = 0; i < k; ++i) idx[i] = i;
            while (true) {
                for (std::size_t i = 0; i < k; ++i) subset[i] = items[idx[i]];
                if (auto it = candidates.find(subset); it != candidates.end()) ++it->second;
                std::size_t pos = k;
                while (pos > 0 && idx[pos - 1] == items.size() - k + pos - 1) --pos;
                if (pos == 0) break;
                ++idx[pos - 1];
                for (std::size_t i = pos; i < k; ++i) idx[i] = idx[i - 1] + 1;
            }
        } else {
            for (auto& [cand, count] : candidates) {
                if (std::includes(items.begin(), items.end(), cand.begin(), cand.end())) ++count;
            }
        }
    }
}

}  // namespace

std::vector<AssociationRule> mine_rules(const std::vector<Transaction>& transactions, const MiningParams& params) {
    if (transactions.empty()) throw std::invalid_argument("mine_rules: no transactions");
    if (!(params.min_support > 0.0 && params.min_support <= 1.0))
        throw std::invalid_argument("mine_rules: min_support must be in (0, 1]");
    if (!(params.min_confidence > 0.0 && params.min_confidence <= 1.0))
        throw std::invalid_argument("mine_rules: min_confidence must be in (0, 1]");
    if (params.max_lhs < 1 || params.max_lhs > kMaxLhsCeiling)
        throw std::invalid_argument("mine_rules: max_lhs must be in [1, 9]");

    const std::size_t n = transactions.size();
    const std::size_t floor = support_floor(params.min_support, n);

    CountTable all_frequent;
    std::vector<ItemSet> level;
    {
        std::unordered_map<ClusterId, std::size_t> singles;
        for (const auto& t : transactions)
            for (ClusterId c : t.items) ++singles[c];
        for (const auto& [c, count] : singles) {
            if (count >= floor) {
                level.push_back({c});
                all_frequent.emplace(ItemSet{c}, count);
            }
        }
        std::sort(level.begin(), level.end());
    }

    for (std::size_t k = 2; k <= params.max_lhs + 1 && level.size() >= 2; ++k) {
        CountTable candidates;
        for (auto& c : next_candidates(level, all_frequent)) candidates.emplace(std::move(c), 0);
        if (candidates.empty()) break;
        count_candidates(transactions, k, candidates);
        level.clear();
        for (auto& [cand, count] : candidates) {
            if (count >= floor) {
                level.push_back(cand);
                all_frequent.emplace(cand, count);
            }
        }
        std::sort(level.begin(), level.end());
    }

    std::vector<AssociationRule> rules;
    for (const auto& [items, count] : all_frequent) {
        if (items.size() < 2) continue;
        for (std::size_t i = 0; i < items.size(); ++i) {
            AssociationRule r;
            r.rhs = items[i];
            r.lhs = items;
            r.lhs.erase(r.lhs.begin() + static_cast<std::ptrdiff_t>(i));
            r.count = count;
            r.lhs_count = all_frequent.at(r.lhs);
            if (!meets_confidence(r.count, r.lhs_count, params.min_confidence)) continue;
            r.support = static_cast<double>(r.count) / static_cast<double>(n);
            r.confidence = static_cast<double>(r.count) / static_cast<double>(r.lhs_count);
            rules.push_back(std::move(r));
        }
    }
    std::sort(rules.begin(), rules.end(), rule_order);
    return rules;
}

void dump_transactions(std::ostream& out, const std::vector<Transaction>& transactions) {
    for (const auto& t : transactions) {
        for (std::size_t i = 0; i < t.items.size(); ++i) out << (i ? "," : "") << 'C' << t.items[i].value;
        out << '\n';
    }
}

}  // namespace nextmethod
