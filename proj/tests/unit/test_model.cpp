#include "doctest.h"

#include "fixtures.hpp"
#include "planted.hpp"

#include "nextmethod/model.hpp"

#include <filesystem>
#include <sstream>

using namespace nextmethod;
using namespace nextmethod::testing;

namespace {

std::string saved(const Model& m) {
    std::ostringstream out;
    save_model(m, out);
    return out.str();
}

Model loaded(const std::string& text) {
    std::istringstream in(text);
    return load_model(in);
}

}  // namespace

TEST_CASE("save and load round-trip") {
    const Model original = synthetic_model(4, {rule({1}, 2, 0.8), rule({1, 3}, 2, 0.9)}, 0.85, 3, {2, 5, 7, 2});
    const Model copy = loaded(saved(original));
    CHECK(copy.clusters().size() == 4);
    CHECK(copy.rules().size() == 2);
    CHECK(copy.rules()[0].lhs == original.rules()[0].lhs);
    CHECK(copy.rules()[0].confidence == original.rules()[0].confidence);
    CHECK(copy.config().gamma == 0.85);
    CHECK(copy.config().max_lhs == 3);
    CHECK(copy.centroid(ClusterId{2}).line_count == 7);
    CHECK(copy.centroid(ClusterId{2}).source_text == original.centroid(ClusterId{2}).source_text);
    CHECK(saved(copy) == saved(original));
}

TEST_CASE("file round-trip") {
    const auto path = std::filesystem::temp_directory_path() / "nextmethod-unit.model";
    const Model original = synthetic_model(3, {rule({0}, 1, 0.7)});
    save_model(original, path);
    CHECK(load_model(path).rules().size() == 1);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_model(path), ModelError);
}

TEST_CASE("corrupt models are rejected") {
    const std::string good = saved(synthetic_model(3, {rule({0}, 1, 0.7)}));
    SUBCASE("truncated") { CHECK_THROWS_AS(loaded(good.substr(0, good.size() / 2)), ModelError); }
    SUBCASE("empty") { CHECK_THROWS_AS(loaded(""), ModelError); }
    SUBCASE("dangling rule") {
        std::string bad = good;
        const auto pos = bad.find("\"rhs\":1");
        REQUIRE(pos != std::string::npos);
        bad.replace(pos, 7, "\"rhs\":42");
        CHECK_THROWS_AS(loaded(bad), ModelError);
    }
    SUBCASE("wrong version") {
        std::string bad = good;
        const auto pos = bad.find("\"version\":");
        REQUIRE(pos != std::string::npos);
        bad.replace(pos, 11, "\"version\":9");
        CHECK_THROWS_AS(loaded(bad), ModelError);
    }
}

TEST_CASE("constructor validates invariants") {
    std::vector<Cluster> clusters{Cluster{ClusterId{0}, {MethodId{0}}, MethodId{1}}};
    std::vector<CentroidSource> centroids(1);
    centroids[0].method_id = MethodId{1};
    CHECK_THROWS_AS(Model(ModelConfig{}, clusters, centroids, {}), ModelError);

    auto self_rule = rule({1}, 1, 0.5);
    CHECK_THROWS_AS(synthetic_model(3, {self_rule}), ModelError);
    CHECK_THROWS_AS(synthetic_model(3, {rule({1}, 7, 0.5)}), ModelError);
}

TEST_CASE("build_model over the planted corpus") {
    auto commits = make_planted_corpus().commits;
    commits = mine_commits(std::move(commits));
    ModelConfig cfg;
    cfg.min_support = 0.05;
    cfg.min_confidence = 0.9;
    const Model model = build_model(commits, cfg, 2);
    CHECK(model.config().training_commits == commits.size());
    CHECK_FALSE(model.config().corpus_fingerprint.empty());
    CHECK(model.rules().size() >= 3);
    for (const auto& c : model.clusters()) CHECK(model.centroid(c.cluster_id).method_id == c.centroid);

    ModelConfig dropped = cfg;
    dropped.drop_singletons = true;
    const Model small = build_model(commits, dropped);
    CHECK(small.clusters().size() < model.clusters().size());
    for (const auto& c : small.clusters()) CHECK(c.members.size() >= 2);
}
