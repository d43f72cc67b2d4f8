#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <cstdlib>

#include "schro1d/errors.hpp"
#include "schro1d/harness.hpp"

using namespace schro1d;
using nlohmann::json;

namespace {

std::string config_path_of(const std::function<void()>& body) {
    try {
        body();
    } catch (const ConfigError& e) {
        return e.path();
    }
    return "<no error>";
}

std::string suite_with(const std::string& scenario) {
    return R"({"suite": "t", "scenarios": [)" + scenario + "]}";
}

const char* free_sin = R"({"id": "sin", "potential": {"breakpoints": [0, 20], "values": [0]}, "energy": 1,
    "span": [0, 20], "method": "analytic", "solution": "free_sin", "checks": ["derivative_bound"]})";

} // namespace

TEST_CASE("config errors name the field path") {
    CHECK(config_path_of([] { parse_suite(suite_with(R"({"id": "a", "energy": 1, "span": [0, 1]})")); }) ==
          "scenarios[0].potential");
    CHECK(config_path_of([] {
              parse_suite(suite_with(R"({"id": "a", "potential": {"breakpoints": [0, 1], "values": [0]},
                  "energy": "x", "span": [0, 1], "init": {"u0": 0, "du0": 1}})"));
          }) == "scenarios[0].energy");
    CHECK(config_path_of([] {
              parse_suite(suite_with(R"({"id": "a", "potential": {"breakpoints": [1, 0], "values": [0]},
                  "energy": 1, "span": [0, 1], "init": {"u0": 0, "du0": 1}})"));
          }) == "scenarios[0].potential");
    CHECK(config_path_of([] {
              parse_suite(suite_with(std::string(free_sin) + R"(, {"id": "b", "potential": {"breakpoints": [0, 1],
                  "values": [0]}, "energy": 1, "span": [0, 1], "init": {"u0": 0, "du0": 1},
                  "checks": ["derivative_bound", {"name": "local_lp", "p": 0.5}]})"));
          }) == "scenarios[1].checks[1].p");
    CHECK(config_path_of([] {
              parse_suite(suite_with(R"({"id": "a", "potential": {"family": "triangle"}, "energy": 1,
                  "span": [0, 1], "init": {"u0": 0, "du0": 1}})"));
          }) == "scenarios[0].potential.family");
    CHECK(config_path_of([] {
              parse_suite(suite_with(R"({"id": "a", "potential": {"breakpoints": [0, 1], "values": [0]},
                  "energy": 1, "span": [0, 1], "init": {"u0": 0, "du0": 0}})"));
          }) == "scenarios[0].init");
    CHECK(config_path_of([] {
              parse_suite(suite_with(R"({"id": "a", "potential": {"breakpoints": [0, 1], "values": [0]},
                  "energy": -1, "span": [0, 1], "method": "analytic", "solution": "free_sin"})"));
          }) == "scenarios[0].energy");
    CHECK(config_path_of([] { parse_suite(suite_with(std::string(free_sin) + "," + free_sin)); }) ==
          "scenarios[1].id");
    CHECK(config_path_of([] { parse_suite("{not json"); }) == "");
    CHECK_THROWS_AS(load_suite("/nonexistent/suite.json"), ConfigError);
}

TEST_CASE("empty suite") {
    const auto report = run_suite(parse_suite(R"({"suite": "empty"})"));
    CHECK(report.scenarios.empty());
    CHECK(exit_code(report) == 0);
    const auto j = json::parse(report_to_json(report));
    CHECK(j["scenarios"].empty());
    CHECK(j["summary"]["scenarios"] == 0);
}

TEST_CASE("potential shorthand") {
    const auto well = parse_potential(R"({"family": "square_well", "depth": 2, "width": 3})");
    CHECK(well(1.0) == -2.0);
    CHECK(c1_sup(well).supremum == doctest::Approx(2.0));
    const auto a = parse_potential(R"({"family": "random_step", "cells": 12})", 5);
    const auto b = parse_potential(R"({"family": "random_step", "cells": 12, "seed": 5})", 99);
    CHECK(a.cell_count() == 12);
    CHECK(std::equal(a.values().begin(), a.values().end(), b.values().begin(), b.values().end()));
    CHECK(parse_potential(R"({"family": "spike_lattice", "g": 1})").discretization_surrogate());
}

TEST_CASE("closed-form fixtures pass") {
    const auto config = parse_suite(R"({"suite": "fixtures", "scenarios": [
      {"id": "free-sin", "potential": {"breakpoints": [0, 20], "values": [0]}, "energy": 1,
       "init": {"u0": 0, "du0": 1}, "span": [0, 20],
       "checks": ["derivative_bound", "persistence", "local_lp", "derivative_lp", "prufer"]},
      {"id": "exponential", "potential": {"breakpoints": [0, 5], "values": [0]}, "energy": -1,
       "init": {"u0": 1, "du0": 1}, "span": [0, 5], "checks": ["derivative_bound", "persistence", "local_lp"]},
      {"id": "square-well", "potential": {"family": "square_well", "depth": 2, "width": 3}, "energy": 1,
       "init": {"u0": 0, "du0": 1}, "span": [-5, 10],
       "checks": ["derivative_bound", "persistence", "local_lp", "derivative_lp",
                  {"name": "lemma31", "samples": 300}, "prufer"]}]})");
    const auto report = run_suite(config);
    REQUIRE(report.scenarios.size() == 3);
    CHECK(exit_code(report) == 0);
    for (const auto& s : report.scenarios) {
        CHECK_MESSAGE(s.status == ScenarioStatus::pass, s.id << ": " << s.error);
        CHECK_FALSE(s.outcomes.empty());
    }
    CHECK(report.scenarios[0].id == "exponential");
    CHECK(report.scenarios[2].constants.c1 == doctest::Approx(2.0));
    CHECK(report.scenarios[2].constants.c2 == doctest::Approx(3.0));
}

TEST_CASE("expected failures and unexpected passes") {
    const std::string sin_decay = R"({"id": "sin-decay", "potential": {"breakpoints": [0, 20], "values": [0]},
        "energy": 1, "span": [0, 20], "method": "analytic", "solution": "free_sin",
        "checks": ["decay"], "expected": "expected_fail"})";
    auto report = run_suite(parse_suite(suite_with(sin_decay)));
    CHECK(report.scenarios[0].status == ScenarioStatus::expected_fail);
    CHECK(exit_code(report) == 0);
    CHECK(json::parse(report_to_json(report))["scenarios"][0]["status"] == "expected_fail");

    auto unmarked = parse_suite(suite_with(sin_decay));
    unmarked.scenarios[0].expected = Expectation::pass;
    report = run_suite(unmarked);
    CHECK(report.scenarios[0].status == ScenarioStatus::fail);
    CHECK(exit_code(report) == 1);

    auto passing = parse_suite(suite_with(free_sin));
    passing.scenarios[0].expected = Expectation::expected_fail;
    report = run_suite(passing);
    CHECK(report.scenarios[0].status == ScenarioStatus::unexpected_pass);
    CHECK(exit_code(report) == 1);
}

TEST_CASE("degenerate constants need an explicit floor") {
    const std::string text = suite_with(R"({"id": "flat", "potential": {"breakpoints": [0, 10], "values": [0]},
        "energy": 0, "init": {"u0": 1, "du0": 0}, "span": [0, 10], "checks": ["local_lp"]})");
    auto report = run_suite(parse_suite(text));
    CHECK(report.scenarios[0].status == ScenarioStatus::error);
    CHECK(report.scenarios[0].error.find("c2 floor") != std::string::npos);
    CHECK(exit_code(report) == 1);

    auto floored = parse_suite(text);
    floored.c2_floor = 1.0;
    report = run_suite(floored);
    CHECK(report.scenarios[0].status == ScenarioStatus::pass);
    CHECK(report.scenarios[0].c2_floor_applied);
    CHECK(report.scenarios[0].constants.c2 == 1.0);
    const auto j = json::parse(report_to_json(report));
    CHECK(j["c2_floor"] == 1.0);
    CHECK(j["scenarios"][0]["constants"]["c2_floor_applied"] == true);
}

TEST_CASE("scenario errors are isolated") {
    const auto report = run_suite(parse_suite(suite_with(std::string(free_sin) + R"(,
        {"id": "short", "potential": {"breakpoints": [0, 1], "values": [0]}, "energy": 1,
         "init": {"u0": 0, "du0": 1}, "span": [0, 0.5], "checks": ["derivative_bound"]})")));
    CHECK(report.scenarios[0].status == ScenarioStatus::error);
    CHECK(report.scenarios[1].status == ScenarioStatus::pass);
    CHECK(exit_code(report) == 1);
}

TEST_CASE("solve_scenario propagates both ways from x0") {
    Scenario s;
    s.potential = PiecewisePotential({0.0, 20.0}, {0.0});
    s.energy = {1.0, 0.0};
    s.init = {5.0, std::sin(5.0), std::cos(5.0)};
    s.span_a = 0.0;
    s.span_b = 10.0;
    s.max_step = 1e-2;
    const auto t = solve_scenario(s);
    CHECK(t.xs.front() == 0.0);
    CHECK(t.xs.back() == 10.0);
    for (std::size_t i = 1; i < t.size(); ++i)
        REQUIRE(t.xs[i] > t.xs[i - 1]);
    for (std::size_t i = 0; i < t.size(); i += 97)
        CHECK(std::abs(t.u[i] - std::sin(t.xs[i])) < 1e-12);
}

TEST_CASE("report echoes constants and is deterministic") {
    const auto a = run_suite(SCHRO1D_DEFAULT_SUITE);
    const auto b = run_suite(SCHRO1D_DEFAULT_SUITE);
    CHECK(exit_code(a) == 0);
    CHECK(report_to_json(a, false) == report_to_json(b, false));
    const auto j = json::parse(report_to_json(a));
    CHECK(j.contains("wall_time_seconds"));
    CHECK_FALSE(json::parse(report_to_json(a, false)).contains("wall_time_seconds"));
    for (const auto& s : j["scenarios"]) {
        const auto& k = s["constants"];
        const double c2 = k["c2"], c = k["C"], kk = k["K"], d = k["delta"];
        CHECK(c == doctest::Approx(c2 * (1 + 2 * kk)).epsilon(1e-12));
        CHECK(c2 * d * (d + 1) == doctest::Approx(0.5).epsilon(1e-12));
    }
    for (std::size_t i = 1; i < a.scenarios.size(); ++i)
        CHECK(a.scenarios[i - 1].id < a.scenarios[i].id);
}

TEST_CASE("overrides") {
    RunOverrides o;
    o.seed = 42;
    o.max_step = 2e-3;
    const auto r = run_suite(SCHRO1D_DEFAULT_SUITE, o);
    CHECK(r.corpus_seed == 42);
    CHECK(exit_code(r) == 0);
    for (const auto& s : r.scenarios)
        if (s.id == "exp-growth")
            CHECK(s.trace_points == 2501);
}

TEST_CASE("thread cap does not change the report") {
    ::setenv("SCHRO1D_THREADS", "1", 1);
    CHECK(worker_count() == 1);
    const auto serial = report_to_json(run_suite(SCHRO1D_DEFAULT_SUITE), false);
    ::unsetenv("SCHRO1D_THREADS");
    CHECK(serial == report_to_json(run_suite(SCHRO1D_DEFAULT_SUITE), false));
}

TEST_CASE("sweep generation and determinism") {
    SweepOptions o;
    o.n_scenarios = 10;
    o.seed = 1;
    o.lemma_samples = 200;
    const auto scenarios = sweep_scenarios(o);
    REQUIRE(scenarios.size() == 10);
    CHECK(scenarios[0].id == "sweep-000-square_well");
    bool has_complex = false, has_prufer = false;
    for (const auto& s : scenarios) {
        has_complex |= !s.energy.is_real();
        for (const auto& c : s.checks)
            has_prufer |= c.name == "prufer";
    }
    CHECK(has_complex);
    CHECK(has_prufer);

    const auto a = random_sweep(o);
    const auto b = random_sweep(o);
    CHECK(report_to_json(a, false) == report_to_json(b, false));
    CHECK(exit_code(a) == 0);
    for (const auto& s : a.scenarios)
        CHECK_MESSAGE(s.status == ScenarioStatus::pass, s.id << ": " << s.error);

    o.seed = 2;
    CHECK(report_to_json(random_sweep(o), false) != report_to_json(a, false));
    o.families = {"hexagon"};
    CHECK_THROWS_AS(sweep_scenarios(o), ConfigError);
}

TEST_CASE("outcome export") {
    CheckOutcome o;
    o.name = "derivative_bound";
    o.points_checked = 3;
    o.worst_ratio = 0.25;
    o.pass = true;
    const auto j = json::parse(outcomes_to_json({o}));
    REQUIRE(j.is_array());
    CHECK(j[0]["name"] == "derivative_bound");
    CHECK(j[0]["worst_ratio"] == 0.25);
}
