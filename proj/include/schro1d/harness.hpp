#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "schro1d/constants.hpp"
#include "schro1d/potential.hpp"
#include "schro1d/solver.hpp"
#include "schro1d/verifier.hpp"

namespace schro1d {

inline constexpr const char* tool_version = "0.1.0";

/// One requested check. Fields that do not apply to `name` are ignored.
///
/// Names: derivative_bound, persistence, local_lp, derivative_lp, weighted,
/// decay, lemma31, prufer.
struct CheckSpec {
    std::string name;
    double p = 2.0;
    // weighted
    WeightKind weight_kind = WeightKind::exponential;
    double weight_parameter = 0.0;
    std::vector<double> weight_xs;
    std::vector<double> weight_ws;
    double window_a = 0.0;
    double window_b = 0.0;
    // decay
    double tail_fraction = 0.2;
    double decay_factor = 10.0;
    // lemma31
    int samples = 1000;
    double max_length = 1.0;
};

enum class Expectation { pass, expected_fail };

/// Closed-form solutions usable with Method::analytic.
///   harmonic_ground: u = exp(-x^2/2), E = 1 (V = x^2)
///   free_sin:        u = sin(k x),  E = k^2 > 0 (V = 0)
///   exp_decay:       u = exp(-k x), E = -k^2 < 0 (V = 0)
///   exp_growth:      u = exp(k x),  E = -k^2 < 0 (V = 0)
enum class AnalyticSolution { harmonic_ground, free_sin, exp_decay, exp_growth };

struct Scenario {
    std::string id;
    PiecewisePotential potential;
    Energy energy;
    InitialData init;
    double span_a = 0.0;
    double span_b = 1.0;
    double max_step = 1e-3;
    Method method = Method::exact_cell;
    AnalyticSolution solution = AnalyticSolution::free_sin;
    std::vector<CheckSpec> checks;
    std::uint64_t seed = 0;
    Expectation expected = Expectation::pass;
};

enum class ScenarioStatus { pass, fail, expected_fail, unexpected_pass, error };

const char* to_string(ScenarioStatus s) noexcept;

struct ScenarioResult {
    std::string id;
    Expectation expected = Expectation::pass;
    ScenarioStatus status = ScenarioStatus::error;
    EstimateConstants constants;
    double c1_argmax = 0.0;
    bool c2_floor_applied = false;
    double potential_left = 0.0;
    double potential_right = 0.0;
    bool discretization_surrogate = false;
    std::string method;
    std::size_t trace_points = 0;
    std::vector<CheckOutcome> outcomes;
    std::string error;
};

struct SuiteReport {
    std::string suite;
    std::uint64_t corpus_seed = 0;
    std::optional<double> c2_floor;
    std::vector<ScenarioResult> scenarios; // sorted by id
    double wall_time_seconds = 0.0;
};

struct SuiteConfig {
    std::string suite = "suite";
    std::uint64_t seed = 0;
    std::optional<double> c2_floor;
    std::vector<Scenario> scenarios;
};

/// Command-line overrides applied on top of a parsed config.
struct RunOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<double> max_step;
    std::optional<double> c2_floor;
};

/// Parses a suite document. Throws ConfigError naming the field path.
SuiteConfig parse_suite(const std::string& json_text);
SuiteConfig load_suite(const std::filesystem::path& path);

/// Parses a potential document: {"breakpoints": [...], "values": [...]} or
/// a family shorthand such as {"family": "square_well", "depth": 2, "width": 3}.
PiecewisePotential parse_potential(const std::string& json_text, std::uint64_t seed = 0);

/// Builds the solution trace of a scenario over its span.
SolutionTrace solve_scenario(const Scenario& s);

/// build potential -> C1 -> constants -> trace -> checks. Scenario-level
/// failures (degenerate constants, overflow, short traces) are captured in
/// the result as status error.
ScenarioResult run_scenario(const Scenario& s, std::uint64_t corpus_seed, std::optional<double> c2_floor);

/// Runs every scenario (in parallel, capped by SCHRO1D_THREADS) and returns
/// the report sorted by scenario id. Throws ConfigError on duplicate ids.
SuiteReport run_suite(const SuiteConfig& config);
SuiteReport run_suite(const std::filesystem::path& config_path, const RunOverrides& overrides = {});

struct SweepOptions {
    std::vector<std::string> families{"square_well", "spike_lattice", "random_step"};
    int n_scenarios = 10;
    std::vector<Energy> energies{{1.0, 0.0}, {4.0, 0.0}, {2.0, 1.0}, {-1.0, 0.5}};
    std::uint64_t seed = 1;
    int lemma_samples = 1000;
    double span_length = 10.0;
};

/// Randomised scenarios drawn from the potential families; real energies get
/// real initial data and a Prufer check.
std::vector<Scenario> sweep_scenarios(const SweepOptions& options);
SuiteReport random_sweep(const SweepOptions& options);

/// 0 when every scenario passed or failed as expected, 1 otherwise.
int exit_code(const SuiteReport& report);

/// Pretty JSON. Wall time is omitted when include_wall_time is false.
std::string report_to_json(const SuiteReport& report, bool include_wall_time = true);

/// JSON array of outcomes.
std::string outcomes_to_json(const std::vector<CheckOutcome>& outcomes);

/// Worker count: SCHRO1D_THREADS if set and positive, else hardware concurrency.
unsigned worker_count();

} // namespace schro1d
