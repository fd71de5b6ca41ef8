#include "doctest.h"

#include "fixtures.hpp"

#include "nextmethod/recommender.hpp"

using namespace nextmethod;
using namespace nextmethod::testing;

namespace {

ItemSet items(std::initializer_list<std::uint32_t> ids) {
    ItemSet s;
    for (auto i : ids) s.push_back(ClusterId{i});
    return s;
}

}  // namespace

TEST_CASE("assignment needs similarity strictly above gamma") {
    const Model model = synthetic_model(3, {});
    const auto exact = assign_cluster(distinct_method(1), model, 0.9);
    REQUIRE(exact);
    CHECK(exact->cluster == ClusterId{1});
    CHECK(exact->similarity == 1.0);
    CHECK_FALSE(assign_cluster(distinct_method(1), model, 1.0));
    CHECK_FALSE(assign_cluster("int unrelated(String s) { return s.length(); }", model, 0.1));
}

TEST_CASE("assignment ties go to the lower cluster id") {
    std::vector<Cluster> clusters;
    std::vector<CentroidSource> centroids;
    for (std::uint32_t i = 0; i < 3; ++i) {
        clusters.push_back(Cluster{ClusterId{i}, {MethodId{i}}, MethodId{i}});
        CentroidSource src;
        src.method_id = MethodId{i};
        src.source_text = i == 0 ? "void other() { }" : "void same() { go(); }";
        centroids.push_back(src);
    }
    const Model model(ModelConfig{}, clusters, centroids, {});
    const auto m = assign_cluster("void same() { go(); }", model, 0.5);
    REQUIRE(m);
    CHECK(m->cluster == ClusterId{1});
}

TEST_CASE("candidate LHS subsets") {
    CHECK(candidate_lhs(items({}), 3).empty());
    CHECK(candidate_lhs(items({5}), 3) == std::vector<ItemSet>{items({5})});
    CHECK(candidate_lhs(items({1, 2, 3}), 1) == std::vector<ItemSet>{items({1}), items({2}), items({3})});
    CHECK(candidate_lhs(items({1, 2, 3}), 9).size() == 7);
}

TEST_CASE("rules whose RHS is already present are suppressed live") {
    const Model model = synthetic_model(5, {rule({1}, 2, 0.9), rule({1}, 3, 0.8)});
    const auto recs = recommend(items({1, 2}), model);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].rhs_cluster == ClusterId{3});
    CHECK(recs[0].code == distinct_method(3));
    CHECK(recs[0].repo_id == "github.com/example/fixture");

    const auto replay = select_rules(items({1, 2}), model, RuleSelection{false, std::nullopt});
    CHECK(replay.size() == 2);
}

TEST_CASE("recommendations are ordered by confidence") {
    const Model model = synthetic_model(6, {rule({1}, 4, 0.55), rule({1}, 3, 0.95), rule({2}, 5, 0.75)});
    const auto recs = recommend(items({1, 2}), model);
    REQUIRE(recs.size() == 3);
    CHECK(recs[0].confidence == 0.95);
    CHECK(recs[1].confidence == 0.75);
    CHECK(recs[2].confidence == 0.55);
}

TEST_CASE("max_lhs limits matched subsets") {
    const Model model = synthetic_model(5, {rule({1, 2}, 4, 0.9)}, 0.9, 1);
    CHECK(recommend(items({1, 2}), model).empty());
}

TEST_CASE("same-RHS keeps the strongest rule") {
    const Model model = synthetic_model(10, {rule({2}, 9, 0.7), rule({1}, 9, 0.6), rule({1, 2}, 9, 0.8)});
    const auto recs = recommend(items({1, 2}), model);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].rule.lhs == items({1, 2}));
}

TEST_CASE("conflict detection") {
    const auto a = rule({1}, 3, 0.7);
    const auto b = rule({2, 3}, 1, 0.6);
    CHECK(rules_conflict(a, b, items({1, 2, 3})));
    CHECK(rules_conflict(b, a, items({1, 2, 3})));
    CHECK_FALSE(rules_conflict(a, rule({2}, 4, 0.5), items({1, 2})));
}

TEST_CASE("signatures of matched methods label a recommendation") {
    const Model model = synthetic_model(4, {rule({1, 2}, 3, 0.9)});
    const std::vector<MatchedMethod> matched{{"b()", ClusterId{2}}, {"a()", ClusterId{1}}, {"a2()", ClusterId{1}}};
    const auto recs = recommend(matched, model);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].lhs_signatures.size() >= 2);
    CHECK(provenance_comment(recs[0]) == "// Source: github.com/example/fixture (commit cd, src/Fixture.java)");
}
