#include "dubois/scenario.hpp"

#include <doctest.h>

#include <cstdio>
#include <fstream>

using namespace dubois;

TEST_CASE("parse_scenario: defaults and happy path") {
    Scenario s = parse_scenario("model = smooth_plane\nD = 2\nchecks = ses,subcomplex\n");
    CHECK(s.model == ScenarioModel::smooth_plane);
    CHECK(s.D == 2);
    CHECK(s.p_min == -1); // default
    CHECK(s.checks == std::vector<std::string>{"ses", "subcomplex"});
    CHECK(s.format == ReportFormat::text);
}

TEST_CASE("parse_scenario: comments, whitespace, rational t0") {
    Scenario s = parse_scenario(
        "# a comment\n"
        "model = smooth_plane\n"
        "  D =  3 \n"
        "checks = fiber_restriction\n"
        "fiber_t0 = 1/2\n"
        "format = json\n");
    CHECK(s.D == 3);
    CHECK(s.fiber_t0 == Rat(1, 2));
    CHECK(s.format == ReportFormat::json);
}

TEST_CASE("parse_scenario: constraint violations are collected with line numbers") {
    try {
        parse_scenario("model = smooth_plane\nD = 1\nchecks = ses\n");
        FAIL("expected ScenarioError");
    } catch (const ScenarioError& e) {
        REQUIRE(e.messages.size() == 1);
        CHECK(e.messages[0].find("line 2") != std::string::npos);
        CHECK(e.messages[0].find("D must be >= 2") != std::string::npos);
    }

    try {
        parse_scenario("model = smooth_plane\nD = 2\nchecks = stationary\n");
        FAIL("expected ScenarioError");
    } catch (const ScenarioError& e) {
        REQUIRE(e.messages.size() == 1);
        CHECK(e.messages[0].find("stationary requires p_min <= -2") != std::string::npos);
    }

    // several problems at once: all reported
    try {
        parse_scenario("model = bogus\nD = x\nweird = 1\n");
        FAIL("expected ScenarioError");
    } catch (const ScenarioError& e) {
        CHECK(e.messages.size() == 4); // model, D, unknown key, empty checks
    }
}

TEST_CASE("parse_scenario: cross-field model constraints") {
    CHECK_THROWS_AS(parse_scenario("model = nodal_union\nD = 2\nchecks = fiber_restriction\n"),
                    ScenarioError);
    CHECK_THROWS_AS(parse_scenario("model = smooth_plane\nD = 2\nchecks = functorial\n"),
                    ScenarioError);
    CHECK_THROWS_AS(parse_scenario("model = custom\nD = 2\nchecks = ses\n"), ScenarioError);
}

TEST_CASE("run_scenario: smooth plane, all applicable checks pass") {
    Scenario s = parse_scenario(
        "model = smooth_plane\nD = 2\np_min = -2\n"
        "checks = ses,subcomplex,assoc_graded,abs_to_rel,stationary,fiber_restriction\n");
    Report r = run_scenario(s);
    CHECK(r.verdict());
    // every check requested shows up, plus the structural validation entry
    CHECK(r.checks.size() == 7);
}

TEST_CASE("run_scenario: nodal union passes its checks") {
    Scenario s = parse_scenario(
        "model = nodal_union\nD = 2\nchecks = ses,subcomplex,assoc_graded,abs_to_rel,functorial\n");
    Report r = run_scenario(s);
    CHECK(r.verdict());
}

TEST_CASE("run_scenario: corrupted custom model fails at validation") {
    std::string path = "corrupt_model_test.json";
    {
        std::ofstream out(path);
        out << R"({"lo": 0, "dims": [1, 1, 1],
                   "d": {"0": [[1]], "1": [[1]]}})"; // d*d = 1 != 0
    }
    Scenario s = parse_scenario("model = custom\nD = 2\nchecks = ses\ncustom_file = " + path + "\n");
    Report r = run_scenario(s);
    CHECK(!r.verdict());
    REQUIRE(!r.checks.empty());
    CHECK(r.checks.front().name == "build_model");
    CHECK(r.checks.front().error.find("d*d") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("run_scenario: valid custom model with zero wedge passes") {
    std::string path = "ok_model_test.json";
    {
        std::ofstream out(path);
        out << R"({"lo": 0, "dims": [2, 2],
                   "d": {"0": [["0", "1"], ["0", "0"]]}})";
    }
    Scenario s = parse_scenario("model = custom\nD = 2\nchecks = ses,subcomplex\ncustom_file = " +
                                path + "\n");
    Report r = run_scenario(s);
    CHECK(r.verdict());
    std::remove(path.c_str());
}

TEST_CASE("emit_report: fixed key order, deterministic modulo timings") {
    Scenario s = parse_scenario("model = nodal_union\nD = 2\nchecks = ses\nformat = json\n");
    Report r1 = run_scenario(s);
    Report r2 = run_scenario(s);
    auto strip = [](Report r) {
        for (auto& c : r.checks) c.ms = 0.0;
        return emit_report(r, ReportFormat::json);
    };
    CHECK(strip(r1) == strip(r2));

    auto j = nlohmann::json::parse(emit_report(r1, ReportFormat::json));
    CHECK(j.contains("scenario"));
    CHECK(j.contains("checks"));
    CHECK(j["verdict"] == "pass");
    CHECK(j["scenario"]["model"] == "nodal_union");

    std::string text = emit_report(r1, ReportFormat::text);
    CHECK(text.find("verdict: pass") != std::string::npos);
}
