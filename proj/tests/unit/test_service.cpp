#include "doctest.h"

#include "fixtures.hpp"
#include "planted.hpp"

#include "nextmethod/service.hpp"

#include <filesystem>
#include <fstream>

using namespace nextmethod;
using namespace nextmethod::testing;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("nextmethod-service-" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        std::filesystem::remove_all(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

std::map<Sensitivity, std::shared_ptr<const Model>> presets() {
    return {
        {Sensitivity::high, std::make_shared<const Model>(synthetic_model(6, {rule({1}, 3, 0.55), rule({2}, 4, 0.9)}))},
        {Sensitivity::low, std::make_shared<const Model>(synthetic_model(6, {rule({2}, 4, 0.9)}))},
    };
}

std::string buffer(const std::vector<std::size_t>& ids) {
    std::vector<std::string> methods;
    for (auto i : ids) methods.push_back("    " + distinct_method(i));
    return java_class("p", "Editor", methods);
}

}  // namespace

TEST_CASE("verdict names") {
    CHECK(parse_verdict("not-useful") == Verdict::not_useful);
    CHECK(to_string(Verdict::copied) == "copied");
    CHECK_THROWS_AS(parse_verdict("meh"), std::invalid_argument);
}

TEST_CASE("recommendation ids are stable per level and rule") {
    const auto r = rule({1, 2}, 3, 0.5);
    CHECK(recommendation_id(Sensitivity::high, r) == recommendation_id(Sensitivity::high, r));
    CHECK(recommendation_id(Sensitivity::high, r) != recommendation_id(Sensitivity::low, r));
    CHECK(recommendation_id(Sensitivity::high, r).starts_with("r"));
}

TEST_CASE("sessions") {
    TempDir dir;
    Service service(presets(), dir.path / "feedback.jsonl");
    CHECK(service.levels() == std::vector<Sensitivity>{Sensitivity::high, Sensitivity::low});

    const auto id = service.create_session();
    CHECK(service.sensitivity(id) == Sensitivity::high);  // medium absent: first loaded level
    CHECK(service.session_count() == 1);
    CHECK_THROWS_AS(service.create_session(Sensitivity::medium), std::invalid_argument);
    CHECK_THROWS_AS(service.submit_buffer("nope", ""), SessionNotFound);

    SUBCASE("matching and recommending") {
        auto r = service.submit_buffer(id, buffer({1, 2}));
        CHECK(r.new_methods == 2);
        REQUIRE(r.matched.size() == 2);
        CHECK(r.matched[0].signature == "zqb()");
        REQUIRE(r.recommendations.size() == 2);
        CHECK(r.recommendations[0].recommendation.rhs_cluster == ClusterId{4});
        CHECK(r.recommendations[0].level == Sensitivity::high);

        SUBCASE("identical buffers are idempotent") {
            const auto again = service.submit_buffer(id, buffer({1, 2}));
            CHECK(again.new_methods == 0);
            CHECK(again.recommendations.size() == 2);
            CHECK(again.recommendations[0].id == r.recommendations[0].id);
        }
        SUBCASE("adding the recommended method suppresses it") {
            const auto next = service.submit_buffer(id, buffer({1, 2, 3}));
            CHECK(next.new_methods == 1);
            REQUIRE(next.recommendations.size() == 1);
            CHECK(next.recommendations[0].recommendation.rhs_cluster == ClusterId{4});
        }
        SUBCASE("matched methods stay matched after removal from the buffer") {
            const auto next = service.submit_buffer(id, buffer({2}));
            CHECK(next.matched.size() == 2);
        }
        SUBCASE("switching sensitivity") {
            CHECK(service.set_sensitivity(id, Sensitivity::low));
            CHECK_FALSE(service.set_sensitivity(id, Sensitivity::low));
            const auto low = service.submit_buffer(id, buffer({1, 2}));
            REQUIRE(low.recommendations.size() == 1);
            CHECK(low.recommendations[0].level == Sensitivity::low);
            CHECK_THROWS_AS(service.set_sensitivity(id, Sensitivity::medium), std::invalid_argument);
        }
        SUBCASE("feedback") {
            const auto& rec = r.recommendations[1];
            auto ack = service.record_feedback(id, rec.id, Verdict::useful);
            CHECK(ack.journal_entries == 1);
            CHECK_FALSE(ack.snippet);
            ack = service.record_feedback(id, rec.id, Verdict::copied);
            CHECK(ack.journal_entries == 2);
            REQUIRE(ack.snippet);
            CHECK(*ack.snippet == provenance_comment(rec.recommendation) + "\n" + distinct_method(3));
            CHECK_THROWS_AS(service.record_feedback(id, "r0", Verdict::useful), UnknownRecommendation);

            std::ifstream journal(dir.path / "feedback.jsonl");
            std::string line;
            std::getline(journal, line);
            CHECK(line.find("\"verdict\":\"useful\"") != std::string::npos);
            CHECK(line.find("\"session_id\":\"" + id + "\"") != std::string::npos);

            // A restarted service keeps counting.
            Service restarted(presets(), dir.path / "feedback.jsonl");
            CHECK(restarted.journal().size() == 2);
        }
    }

    SUBCASE("edits that make a method match are picked up") {
        auto text = buffer({0});
        const auto r = service.submit_buffer(id, java_class("p", "E", {"    void zqb() {\n        other();\n    }"}));
        CHECK(r.matched.empty());
        const auto fixed = service.submit_buffer(id, buffer({1}));
        CHECK(fixed.new_methods == 0);
        CHECK(fixed.matched.size() == 1);
    }

    SUBCASE("sessions are independent") {
        const auto other = service.create_session(Sensitivity::low);
        service.submit_buffer(id, buffer({1, 2}));
        CHECK(service.submit_buffer(other, buffer({5})).matched.size() == 1);
        CHECK(service.session_count() == 2);
    }
}

TEST_CASE("default journal location") {
    CHECK(default_journal_path().filename() == "feedback.jsonl");
}
