#include "doctest.h"

#include "nextmethod/corpus.hpp"
#include "nextmethod/rules.hpp"

#include <sstream>

using namespace nextmethod;

namespace {

Transaction tx(std::initializer_list<std::uint32_t> items) {
    Transaction t;
    for (auto i : items) t.items.push_back(ClusterId{i});
    return t;
}

const AssociationRule* find(const std::vector<AssociationRule>& rules, ItemSet lhs, std::uint32_t rhs) {
    for (const auto& r : rules)
        if (r.lhs == lhs && r.rhs == ClusterId{rhs}) return &r;
    return nullptr;
}

}  // namespace

TEST_CASE("support floor") {
    CHECK(support_floor(8e-6, 625000) == 5);
    CHECK(support_floor(0.5, 10) == 5);
    CHECK(support_floor(0.51, 10) == 6);
    CHECK(support_floor(0.3, 10) == 3);  // 0.3 * 10 is 3.0000000000000004 in binary
    CHECK(support_floor(1e-9, 10) == 1);
}

TEST_CASE("confidence comparison tolerates representation error") {
    CHECK(meets_confidence(7, 10, 0.7));
    CHECK(meets_confidence(1, 3, 1.0 / 3.0));
    CHECK_FALSE(meets_confidence(6, 10, 0.7));
    CHECK_FALSE(meets_confidence(0, 0, 0.1));
}

TEST_CASE("mining a small database") {
    const std::vector<Transaction> db{tx({1, 2, 3}), tx({1, 2}), tx({1, 2, 4}), tx({2, 3}), tx({1, 3})};
    const auto rules = mine_rules(db, MiningParams{0.4, 0.6, 2});

    const auto* r12 = find(rules, {ClusterId{1}}, 2);
    REQUIRE(r12);
    CHECK(r12->count == 3);
    CHECK(r12->lhs_count == 4);
    CHECK(r12->support == 0.6);
    CHECK(r12->confidence == 0.75);
    CHECK(find(rules, {ClusterId{2}}, 1));
    CHECK(find(rules, {ClusterId{3}}, 1));           // 2/3
    CHECK_FALSE(find(rules, {ClusterId{1}}, 3));     // 2/4 < 0.6
    CHECK_FALSE(find(rules, {ClusterId{1}, ClusterId{2}}, 3));  // support 1/5

    for (std::size_t i = 1; i < rules.size(); ++i) CHECK_FALSE(rule_order(rules[i], rules[i - 1]));
    CHECK(rules.front().confidence >= rules.back().confidence);
}

TEST_CASE("max_lhs bounds the LHS size") {
    const std::vector<Transaction> db(4, tx({1, 2, 3, 4}));
    for (std::size_t cap = 1; cap <= 3; ++cap) {
        const auto rules = mine_rules(db, MiningParams{0.5, 0.5, cap});
        std::size_t expected = 0;
        // choose itemset size k+1 (C(4,k+1)) and its rhs (k+1 ways) for k = 1..cap
        const std::size_t per_k[] = {0, 12, 12, 4};
        for (std::size_t k = 1; k <= cap; ++k) expected += per_k[k];
        CHECK(rules.size() == expected);
        for (const auto& r : rules) CHECK(r.lhs.size() <= cap);
    }
}

TEST_CASE("raising confidence only removes rules") {
    const std::vector<Transaction> db{tx({1, 2}), tx({1, 2, 3}), tx({2, 3}), tx({1, 3}), tx({3, 4}), tx({1, 4})};
    std::size_t previous = SIZE_MAX;
    for (double con : {0.05, 0.2, 0.35, 0.5, 0.65, 0.8}) {
        const auto rules = mine_rules(db, MiningParams{0.1, con, 2});
        CHECK(rules.size() <= previous);
        previous = rules.size();
    }
}

TEST_CASE("invalid parameters") {
    const std::vector<Transaction> db{tx({1, 2})};
    CHECK_THROWS_AS(mine_rules(db, MiningParams{0.0, 0.5, 2}), std::invalid_argument);
    CHECK_THROWS_AS(mine_rules(db, MiningParams{0.5, 1.5, 2}), std::invalid_argument);
    CHECK_THROWS_AS(mine_rules(db, MiningParams{0.5, 0.5, 0}), std::invalid_argument);
    CHECK_THROWS_AS(mine_rules({}, MiningParams{0.5, 0.5, 2}), std::invalid_argument);
}

TEST_CASE("transactions are per file and need two clusters") {
    CommitRecord c;
    c.commit_id = "c";
    for (std::uint64_t i = 0; i < 5; ++i) {
        MethodRecord m;
        m.method_id = MethodId{i};
        m.path = i < 3 ? "A.java" : "B.java";
        c.added_methods.push_back(m);
    }
    // A: clusters 7, 7, 2 -> {2,7}; B: cluster 7 and one unassigned -> dropped
    const ClusterAssignment assignment{{MethodId{0}, ClusterId{7}}, {MethodId{1}, ClusterId{7}},
                                       {MethodId{2}, ClusterId{2}}, {MethodId{3}, ClusterId{7}}};
    const auto txs = build_transactions({c}, assignment);
    REQUIRE(txs.size() == 1);
    CHECK(txs[0].items == ItemSet{ClusterId{2}, ClusterId{7}});
    CHECK(txs[0].path == "A.java");

    std::ostringstream dump;
    dump_transactions(dump, txs);
    CHECK(dump.str().find("C2") != std::string::npos);
}
