#include "doctest.h"

#include "fixtures.hpp"

#include "nextmethod/evaluation.hpp"

using namespace nextmethod;
using namespace nextmethod::testing;

namespace {

CommitRecord at(std::int64_t t) {
    CommitRecord c;
    c.commit_id = std::to_string(t);
    c.timestamp = t;
    return c;
}

CommitRecord adding(const std::vector<std::size_t>& clusters, const std::vector<int>& extra = {}) {
    CommitRecord c;
    c.commit_id = "x";
    for (std::size_t i = 0; i < clusters.size(); ++i) {
        MethodRecord m;
        m.method_id = MethodId{i};
        const int more = i < extra.size() ? extra[i] : 0;
        m.source_text = distinct_method(clusters[i], more);
        m.line_count = 2 + more;
        c.added_methods.push_back(m);
    }
    return c;
}

}  // namespace

TEST_CASE("split fractions") {
    const auto s = parse_split("0.7, 0.2,0.1");
    CHECK(s.train == 0.7);
    CHECK(s.validation == 0.2);
    CHECK_THROWS_AS(parse_split("0.5,0.5"), std::invalid_argument);
    CHECK_THROWS_AS(parse_split("0.8,0.1,0.2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_split("a,b,c"), std::invalid_argument);
    CHECK_THROWS_AS(parse_split("-0.1,0.6,0.5"), std::invalid_argument);
}

TEST_CASE("time split over the global axis") {
    std::vector<CommitRecord> commits;
    for (std::int64_t t : {100, 150, 179, 180, 189, 190, 200}) commits.push_back(at(t));
    const auto s = time_split(commits);
    CHECK(s.first_timestamp == 100);
    CHECK(s.last_timestamp == 200);
    CHECK(s.train.size() == 3);
    CHECK(s.validation.size() == 2);
    CHECK(s.test.size() == 2);
    CHECK(s.validation.front().timestamp == 180);

    SUBCASE("single instant") {
        const auto one = time_split({at(5), at(5)});
        CHECK(one.train.size() == 2);
        CHECK(one.test.empty());
    }
    SUBCASE("empty") { CHECK_THROWS_AS(time_split({}), std::invalid_argument); }
}

TEST_CASE("assignment of a commit") {
    const Model model = synthetic_model(4, {});
    auto c = adding({2, 99});
    c.added_methods[1].source_text = "int q(String s) { return s.length(); }";
    const auto a = assign_commit(c, model.index(), 0.9);
    REQUIRE(a.clusters.size() == 2);
    CHECK(a.clusters[0] == ClusterId{2});
    CHECK_FALSE(a.clusters[1]);
    CHECK(a.tokens[0] == tokenize(distinct_method(2)));
}

TEST_CASE("replay") {
    const Model model = synthetic_model(6, {rule({1}, 2, 0.9), rule({1}, 4, 0.8), rule({1, 2}, 3, 0.7)});

    SUBCASE("fewer than two matched clusters") {
        CHECK(simulate_commit(adding({1}), model).recommendations.empty());
        CHECK(simulate_commit(adding({1, 1}), model).recommendations.empty());
    }
    SUBCASE("the full matched set is not used as an LHS") {
        const auto o = simulate_commit(adding({1, 2, 5}), model);
        // {1}=>2 correct, {1}=>4 wrong, {1,2}=>3 wrong; {1,2,5} itself is never queried
        CHECK(o.n_recommendations() == 3);
        CHECK(o.n_correct() == 1);
        CHECK(o.covered_methods() == 1);
        CHECK(o.n_matched == 3);
    }
    SUBCASE("correct recommendations consume distinct methods") {
        const auto o = simulate_commit(adding({1, 2, 2}, {0, 0, 3}), model);
        REQUIRE(o.n_correct() == 1);
        const auto& hit = o.recommendations[0];
        CHECK(hit.correct);
        CHECK(hit.consumed_method == std::size_t{1});
        REQUIRE(hit.distance);
        CHECK(hit.distance->count == 0);
        CHECK(o.added_line_counts == std::vector<int>{2, 2, 5});
    }
}

TEST_CASE("quartiles use lower interpolation") {
    const auto q = summarize({4, 1, 3, 2});
    CHECK(q.q1 == 1.0);
    CHECK(q.q2 == 2.0);
    CHECK(q.q3 == 3.0);
    CHECK(q.mean == 2.5);
    const auto empty = summarize({});
    CHECK_FALSE(empty.q1);
    CHECK_FALSE(empty.mean);
}

TEST_CASE("metrics with nothing to divide by") {
    const auto r = compute_metrics({});
    CHECK(r.commits == 0);
    CHECK_FALSE(r.recall);
    CHECK_FALSE(r.precision);
    CHECK_FALSE(r.coverage_methods);
    const auto rows = report_rows(r);
    REQUIRE(rows.size() == 16);
    CHECK(rows[0].first == "#commits");
    CHECK(rows[6].first == "recall");
    CHECK(rows[6].second == "n/a");
    CHECK(rows[15].first == "%distance_tokens(mean)");
}

TEST_CASE("#recom statistics count only triggered commits") {
    CommitOutcome none;
    none.n_added = 2;
    CommitOutcome three;
    three.n_added = 2;
    three.recommendations.resize(3);
    CommitOutcome one;
    one.n_added = 2;
    one.recommendations.resize(1);
    const auto r = compute_metrics({none, three, one});
    CHECK(r.recom_median == 1.0);
    CHECK(r.recom_mean == 2.0);
    CHECK(r.precision == 0.0);
    CHECK(r.coverage_commits == doctest::Approx(2.0 / 3.0));
}
