#include "schro1d/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "schro1d/errors.hpp"
#include "schro1d/spectral.hpp"

namespace schro1d {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

const char* to_string(ScenarioStatus s) noexcept {
    switch (s) {
    case ScenarioStatus::pass: return "pass";
    case ScenarioStatus::fail: return "fail";
    case ScenarioStatus::expected_fail: return "expected_fail";
    case ScenarioStatus::unexpected_pass: return "unexpected_pass";
    case ScenarioStatus::error: return "error";
    }
    return "unknown";
}

namespace {

// ---- config parsing -------------------------------------------------------

double number_at(const json& j, const std::string& path) {
    if (!j.is_number())
        throw ConfigError(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v))
        throw ConfigError(path, "expected a finite number");
    return v;
}

double number_or(const json& obj, const char* key, double fallback, const std::string& path) {
    if (!obj.contains(key))
        return fallback;
    return number_at(obj.at(key), path + "." + key);
}

std::vector<double> numbers_at(const json& j, const std::string& path) {
    if (!j.is_array())
        throw ConfigError(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(number_at(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

std::string string_at(const json& j, const std::string& path) {
    if (!j.is_string())
        throw ConfigError(path, "expected a string");
    return j.get<std::string>();
}

const json& required(const json& obj, const char* key, const std::string& path) {
    if (!obj.is_object())
        throw ConfigError(path, "expected an object");
    if (!obj.contains(key))
        throw ConfigError(path + "." + key, "missing required field");
    return obj.at(key);
}

std::uint64_t seed_at(const json& j, const std::string& path) {
    if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() && j.get<std::int64_t>() < 0))
        throw ConfigError(path, "expected a nonnegative integer");
    return j.get<std::uint64_t>();
}

cplx complex_at(const json& j, const std::string& path) {
    if (j.is_number())
        return {number_at(j, path), 0.0};
    if (j.is_array() && j.size() == 2)
        return {number_at(j[0], path + "[0]"), number_at(j[1], path + "[1]")};
    if (j.is_object())
        return {number_or(j, "re", 0.0, path), number_or(j, "im", 0.0, path)};
    throw ConfigError(path, "expected a number, [re, im] or {\"re\", \"im\"}");
}

Energy energy_at(const json& j, const std::string& path) {
    const cplx z = complex_at(j, path);
    return {z.real(), z.imag()};
}

PiecewisePotential potential_at(const json& j, const std::string& path, std::uint64_t seed) {
    if (!j.is_object())
        throw ConfigError(path, "expected a potential object");
    try {
        if (j.contains("family")) {
            const std::string family = string_at(j.at("family"), path + ".family");
            if (family == "square_well") {
                SquareWellParams p;
                p.depth = number_or(j, "depth", p.depth, path);
                p.width = number_or(j, "width", p.width, path);
                p.offset = number_or(j, "offset", p.offset, path);
                return make_family(p);
            }
            if (family == "spike_lattice") {
                SpikeLatticeParams p;
                p.g = number_or(j, "g", p.g, path);
                p.period = number_or(j, "period", p.period, path);
                p.cap = number_or(j, "cap", p.cap, path);
                p.cell = number_or(j, "cell", p.cell, path);
                p.start = number_or(j, "start", p.start, path);
                p.end = number_or(j, "end", p.end, path);
                return make_family(p);
            }
            if (family == "random_step") {
                RandomStepParams p;
                p.cells = static_cast<int>(number_or(j, "cells", p.cells, path));
                p.value_min = number_or(j, "value_min", p.value_min, path);
                p.value_max = number_or(j, "value_max", p.value_max, path);
                p.width_min = number_or(j, "width_min", p.width_min, path);
                p.width_max = number_or(j, "width_max", p.width_max, path);
                p.start = number_or(j, "start", p.start, path);
                const std::uint64_t s = j.contains("seed") ? seed_at(j.at("seed"), path + ".seed") : seed;
                return make_family(p, s);
            }
            if (family == "quadratic_well") {
                QuadraticWellParams p;
                p.curvature = number_or(j, "curvature", p.curvature, path);
                p.half_width = number_or(j, "half_width", p.half_width, path);
                p.cell = number_or(j, "cell", p.cell, path);
                return make_family(p);
            }
            throw ConfigError(path + ".family", "unknown family '" + family + "'");
        }
        return PiecewisePotential(numbers_at(required(j, "breakpoints", path), path + ".breakpoints"),
                                  numbers_at(required(j, "values", path), path + ".values"));
    } catch (const InvalidArgument& e) {
        throw ConfigError(path, e.what());
    }
}

WeightKind weight_kind_at(const json& j, const std::string& path) {
    const std::string k = string_at(j, path);
    if (k == "exponential")
        return WeightKind::exponential;
    if (k == "polynomial")
        return WeightKind::polynomial;
    if (k == "custom_samples")
        return WeightKind::custom_samples;
    throw ConfigError(path, "unknown weight kind '" + k + "'");
}

CheckSpec check_at(const json& j, const std::string& path) {
    static const std::set<std::string> known{"derivative_bound", "persistence", "local_lp", "derivative_lp",
                                             "weighted", "decay", "lemma31", "prufer"};
    CheckSpec c;
    if (j.is_string()) {
        c.name = j.get<std::string>();
    } else {
        c.name = string_at(required(j, "name", path), path + ".name");
        c.p = number_or(j, "p", c.p, path);
        c.tail_fraction = number_or(j, "tail_fraction", c.tail_fraction, path);
        c.decay_factor = number_or(j, "factor", c.decay_factor, path);
        c.samples = static_cast<int>(number_or(j, "samples", c.samples, path));
        c.max_length = number_or(j, "max_length", c.max_length, path);
        if (j.contains("window")) {
            const auto w = numbers_at(j.at("window"), path + ".window");
            if (w.size() != 2 || !(w[0] < w[1]))
                throw ConfigError(path + ".window", "expected [a, b] with a < b");
            c.window_a = w[0];
            c.window_b = w[1];
        }
        if (j.contains("weight")) {
            const auto& w = j.at("weight");
            const std::string wp = path + ".weight";
            c.weight_kind = weight_kind_at(required(w, "kind", wp), wp + ".kind");
            if (c.weight_kind == WeightKind::exponential)
                c.weight_parameter = number_or(w, "a", 0.0, wp);
            else if (c.weight_kind == WeightKind::polynomial)
                c.weight_parameter = number_or(w, "alpha", 0.0, wp);
            else {
                c.weight_xs = numbers_at(required(w, "xs", wp), wp + ".xs");
                c.weight_ws = numbers_at(required(w, "ws", wp), wp + ".ws");
            }
        }
    }
    if (!known.count(c.name))
        throw ConfigError(path + ".name", "unknown check '" + c.name + "'");
    if (c.name == "weighted" && !(c.window_a < c.window_b))
        throw ConfigError(path + ".window", "weighted check needs a window [a, b]");
    if (!(c.p >= 1.0))
        throw ConfigError(path + ".p", "p must be >= 1");
    return c;
}

void check_analytic_energy(AnalyticSolution s, Energy e, const std::string& path) {
    const bool ok = [&] {
        if (!e.is_real())
            return false;
        switch (s) {
        case AnalyticSolution::harmonic_ground: return e.re == 1.0;
        case AnalyticSolution::free_sin: return e.re > 0.0;
        case AnalyticSolution::exp_decay:
        case AnalyticSolution::exp_growth: return e.re < 0.0;
        }
        return false;
    }();
    if (!ok)
        throw ConfigError(path, "energy is incompatible with the analytic solution");
}

Scenario scenario_at(const json& j, const std::string& path) {
    Scenario s;
    s.id = string_at(required(j, "id", path), path + ".id");
    if (s.id.empty())
        throw ConfigError(path + ".id", "id must be nonempty");
    if (j.contains("seed"))
        s.seed = seed_at(j.at("seed"), path + ".seed");
    s.potential = potential_at(required(j, "potential", path), path + ".potential", s.seed);
    s.energy = energy_at(required(j, "energy", path), path + ".energy");

    const auto span = numbers_at(required(j, "span", path), path + ".span");
    if (span.size() != 2 || !(span[0] < span[1]))
        throw ConfigError(path + ".span", "expected [a, b] with a < b");
    s.span_a = span[0];
    s.span_b = span[1];
    s.max_step = number_or(j, "max_step", s.max_step, path);
    if (!(s.max_step > 0.0))
        throw ConfigError(path + ".max_step", "must be positive");

    const std::string method = j.contains("method") ? string_at(j.at("method"), path + ".method") : "exact_cell";
    if (method == "exact_cell")
        s.method = Method::exact_cell;
    else if (method == "rk4")
        s.method = Method::rk4;
    else if (method == "analytic")
        s.method = Method::analytic;
    else
        throw ConfigError(path + ".method", "unknown method '" + method + "'");

    if (s.method == Method::analytic) {
        static const std::map<std::string, AnalyticSolution> names{
            {"harmonic_ground", AnalyticSolution::harmonic_ground},
            {"free_sin", AnalyticSolution::free_sin},
            {"exp_decay", AnalyticSolution::exp_decay},
            {"exp_growth", AnalyticSolution::exp_growth}};
        const std::string name = string_at(required(j, "solution", path), path + ".solution");
        const auto it = names.find(name);
        if (it == names.end())
            throw ConfigError(path + ".solution", "unknown analytic solution '" + name + "'");
        s.solution = it->second;
        check_analytic_energy(s.solution, s.energy, path + ".energy");
    } else {
        const auto& init = required(j, "init", path);
        const std::string ip = path + ".init";
        s.init.x0 = number_or(init, "x0", s.span_a, ip);
        s.init.u0 = complex_at(required(init, "u0", ip), ip + ".u0");
        s.init.du0 = complex_at(required(init, "du0", ip), ip + ".du0");
        if (s.init.u0 == cplx{0.0} && s.init.du0 == cplx{0.0})
            throw ConfigError(ip, "initial data must be nontrivial");
        if (s.init.x0 < s.span_a || s.init.x0 > s.span_b)
            throw ConfigError(ip + ".x0", "must lie inside the span");
    }

    if (j.contains("checks")) {
        const auto& checks = j.at("checks");
        if (!checks.is_array())
            throw ConfigError(path + ".checks", "expected an array");
        for (std::size_t i = 0; i < checks.size(); ++i)
            s.checks.push_back(check_at(checks[i], path + ".checks[" + std::to_string(i) + "]"));
    }
    if (j.contains("expected")) {
        const std::string e = string_at(j.at("expected"), path + ".expected");
        if (e == "pass")
            s.expected = Expectation::pass;
        else if (e == "expected_fail")
            s.expected = Expectation::expected_fail;
        else
            throw ConfigError(path + ".expected", "expected 'pass' or 'expected_fail'");
    }
    return s;
}

void require_unique_ids(const std::vector<Scenario>& scenarios) {
    std::set<std::string> seen;
    for (std::size_t i = 0; i < scenarios.size(); ++i)
        if (!seen.insert(scenarios[i].id).second)
            throw ConfigError("scenarios[" + std::to_string(i) + "].id", "duplicate id '" + scenarios[i].id + "'");
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("", "cannot read '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("invalid JSON: ") + e.what());
    }
}

} // namespace

SuiteConfig parse_suite(const std::string& json_text) {
    const json doc = parse_json(json_text);
    if (!doc.is_object())
        throw ConfigError("", "suite must be a JSON object");
    SuiteConfig c;
    if (doc.contains("suite"))
        c.suite = string_at(doc.at("suite"), "suite");
    if (doc.contains("seed"))
        c.seed = seed_at(doc.at("seed"), "seed");
    if (doc.contains("c2_floor") && !doc.at("c2_floor").is_null()) {
        c.c2_floor = number_at(doc.at("c2_floor"), "c2_floor");
        if (!(*c.c2_floor > 0.0))
            throw ConfigError("c2_floor", "must be positive");
    }
    if (doc.contains("scenarios")) {
        const auto& list = doc.at("scenarios");
        if (!list.is_array())
            throw ConfigError("scenarios", "expected an array");
        for (std::size_t i = 0; i < list.size(); ++i)
            c.scenarios.push_back(scenario_at(list[i], "scenarios[" + std::to_string(i) + "]"));
    }
    require_unique_ids(c.scenarios);
    return c;
}

SuiteConfig load_suite(const std::filesystem::path& path) { return parse_suite(read_file(path)); }

PiecewisePotential parse_potential(const std::string& json_text, std::uint64_t seed) {
    return potential_at(parse_json(json_text), "potential", seed);
}

// ---- execution ------------------------------------------------------------

SolutionTrace solve_scenario(const Scenario& s) {
    if (s.method == Method::analytic) {
        const auto pieces = std::max<long>(1, static_cast<long>(std::ceil((s.span_b - s.span_a) / s.max_step)));
        std::vector<double> xs(static_cast<std::size_t>(pieces) + 1);
        for (long i = 0; i <= pieces; ++i)
            xs[static_cast<std::size_t>(i)] =
                s.span_a + (s.span_b - s.span_a) * static_cast<double>(i) / static_cast<double>(pieces);
        const double k = std::sqrt(std::abs(s.energy.re));
        switch (s.solution) {
        case AnalyticSolution::harmonic_ground:
            return analytic_trace(
                std::move(xs), [](double x) { return cplx{std::exp(-0.5 * x * x)}; },
                [](double x) { return cplx{-x * std::exp(-0.5 * x * x)}; }, s.energy);
        case AnalyticSolution::free_sin:
            return analytic_trace(
                std::move(xs), [k](double x) { return cplx{std::sin(k * x)}; },
                [k](double x) { return cplx{k * std::cos(k * x)}; }, s.energy);
        case AnalyticSolution::exp_decay:
            return analytic_trace(
                std::move(xs), [k](double x) { return cplx{std::exp(-k * x)}; },
                [k](double x) { return cplx{-k * std::exp(-k * x)}; }, s.energy);
        case AnalyticSolution::exp_growth:
            return analytic_trace(
                std::move(xs), [k](double x) { return cplx{std::exp(k * x)}; },
                [k](double x) { return cplx{k * std::exp(k * x)}; }, s.energy);
        }
    }

    const auto propagate = [&](double to) {
        return s.method == Method::rk4 ? propagate_rk(s.potential, s.energy, s.init, to, s.max_step)
                                       : propagate_exact(s.potential, s.energy, s.init, to, s.max_step);
    };
    if (s.init.x0 == s.span_a)
        return propagate(s.span_b);
    if (s.init.x0 == s.span_b)
        return propagate(s.span_a);
    SolutionTrace left = propagate(s.span_a);
    const SolutionTrace right = propagate(s.span_b);
    // Both halves share the node x0.
    left.xs.insert(left.xs.end(), right.xs.begin() + 1, right.xs.end());
    left.u.insert(left.u.end(), right.u.begin() + 1, right.u.end());
    left.du.insert(left.du.end(), right.du.begin() + 1, right.du.end());
    return left;
}

namespace {

void run_check(const CheckSpec& c, const SolutionTrace& trace, const EstimateConstants& k, std::uint64_t seed,
               std::vector<CheckOutcome>& out) {
    if (c.name == "derivative_bound") {
        out.push_back(check_derivative_bound(trace, k));
    } else if (c.name == "persistence") {
        out.push_back(check_persistence(trace, k));
    } else if (c.name == "local_lp") {
        out.push_back(check_local_lp(trace, k, c.p));
    } else if (c.name == "derivative_lp") {
        out.push_back(check_derivative_lp(trace, k, c.p));
    } else if (c.name == "weighted") {
        const double radius = k.k_radius + k.delta;
        const WeightSpec w = c.weight_kind == WeightKind::exponential   ? exponential_weight(c.weight_parameter, radius)
                             : c.weight_kind == WeightKind::polynomial ? polynomial_weight(c.weight_parameter, radius)
                                                                       : custom_weight(c.weight_xs, c.weight_ws, radius);
        out.push_back(check_weighted(trace, k, c.p, w, c.window_a, c.window_b));
    } else if (c.name == "decay") {
        out.push_back(check_decay(trace, c.tail_fraction, c.decay_factor));
    } else if (c.name == "lemma31") {
        out.push_back(check_lemma31_sampled(trace, k, c.samples, seed, c.max_length));
    } else if (c.name == "prufer") {
        if (!trace.energy.is_real() || !(trace.energy.re > 0.0))
            throw NotRealSolution("Prufer variables need a real energy E = k^2 > 0");
        const double wave = std::sqrt(trace.energy.re);
        const auto p = prufer_decompose(trace, wave);
        CheckOutcome identity;
        identity.name = "prufer_identity";
        identity.points_checked = p.xs.size();
        identity.tolerance = 0.0;
        identity.worst_ratio = prufer_identity_residual(p, trace) / 1e-10;
        identity.witness_x = p.xs.front();
        identity.pass = identity.worst_ratio <= 1.0;
        identity.margin_notes = "pointwise relative residual of k^2R^2 = u'^2 + k^2u^2 and reconstruction, scaled by 1e-10";
        out.push_back(identity);
        CheckOutcome integral = identity;
        integral.name = "prufer_integral";
        integral.worst_ratio = prufer_integral_residual(p, trace) / 1e-8;
        integral.pass = integral.worst_ratio <= 1.0;
        integral.margin_notes = "relative residual of k^2 int R^2 = int u'^2 + k^2 int u^2 (trapezoid), scaled by 1e-8";
        out.push_back(integral);
    }
}

} // namespace

ScenarioResult run_scenario(const Scenario& s, std::uint64_t corpus_seed, std::optional<double> c2_floor) {
    ScenarioResult r;
    r.id = s.id;
    r.expected = s.expected;
    r.method = to_string(s.method);
    r.potential_left = s.potential.left();
    r.potential_right = s.potential.right();
    r.discretization_surrogate = s.potential.discretization_surrogate();
    r.constants.e = s.energy;
    std::vector<std::string> errors;
    try {
        const auto profile = c1_sup(s.potential);
        r.c1_argmax = profile.argmax;
        r.constants.c1 = profile.supremum;
        if (c2_floor) {
            r.constants = constants_with_floor(profile.supremum, s.energy, *c2_floor);
            r.c2_floor_applied = profile.supremum + s.energy.modulus() < *c2_floor;
        } else {
            r.constants = constants_for(profile.supremum, s.energy);
        }
        if (constants_residual(r.constants) > 1e-12)
            throw Error("estimate constants failed re-validation");

        const SolutionTrace trace = solve_scenario(s);
        r.trace_points = trace.size();
        const std::uint64_t seed = splitmix64(corpus_seed ^ splitmix64(s.seed));
        for (std::size_t i = 0; i < s.checks.size(); ++i) {
            try {
                run_check(s.checks[i], trace, r.constants, splitmix64(seed + i), r.outcomes);
            } catch (const Error& e) {
                errors.push_back(s.checks[i].name + ": " + e.what());
            }
        }
    } catch (const Error& e) {
        errors.emplace_back(e.what());
    }
    sort_outcomes(r.outcomes);

    if (!errors.empty()) {
        r.status = ScenarioStatus::error;
        for (std::size_t i = 0; i < errors.size(); ++i)
            r.error += (i ? "; " : "") + errors[i];
        return r;
    }
    const bool all_pass = std::all_of(r.outcomes.begin(), r.outcomes.end(), [](const auto& o) { return o.pass; });
    if (s.expected == Expectation::pass)
        r.status = all_pass ? ScenarioStatus::pass : ScenarioStatus::fail;
    else
        r.status = all_pass ? ScenarioStatus::unexpected_pass : ScenarioStatus::expected_fail;
    return r;
}

unsigned worker_count() {
    if (const char* env = std::getenv("SCHRO1D_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && n > 0)
            return static_cast<unsigned>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

SuiteReport run_all(const std::string& suite, std::uint64_t seed, std::optional<double> c2_floor,
                    const std::vector<Scenario>& scenarios) {
    require_unique_ids(scenarios);
    const auto t0 = std::chrono::steady_clock::now();
    SuiteReport report;
    report.suite = suite;
    report.corpus_seed = seed;
    report.c2_floor = c2_floor;
    report.scenarios.resize(scenarios.size());

    std::atomic<std::size_t> next{0};
    const auto work = [&] {
        for (std::size_t i = next++; i < scenarios.size(); i = next++)
            report.scenarios[i] = run_scenario(scenarios[i], seed, c2_floor);
    };
    const unsigned n = std::min<unsigned>(worker_count(), static_cast<unsigned>(std::max<std::size_t>(1, scenarios.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n; ++t)
        pool.emplace_back(work);
    work();
    for (auto& t : pool)
        t.join();

    std::sort(report.scenarios.begin(), report.scenarios.end(),
              [](const ScenarioResult& a, const ScenarioResult& b) { return a.id < b.id; });
    report.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

} // namespace

SuiteReport run_suite(const SuiteConfig& config) {
    return run_all(config.suite, config.seed, config.c2_floor, config.scenarios);
}

SuiteReport run_suite(const std::filesystem::path& config_path, const RunOverrides& overrides) {
    SuiteConfig config = load_suite(config_path);
    if (overrides.seed)
        config.seed = *overrides.seed;
    if (overrides.c2_floor)
        config.c2_floor = overrides.c2_floor;
    if (overrides.max_step)
        for (auto& s : config.scenarios)
            s.max_step = *overrides.max_step;
    return run_suite(config);
}

std::vector<Scenario> sweep_scenarios(const SweepOptions& o) {
    if (o.n_scenarios < 1)
        throw ConfigError("n_scenarios", "sweep needs at least one scenario");
    if (o.families.empty() || o.energies.empty())
        throw ConfigError(o.families.empty() ? "families" : "energies", "sweep needs at least one family and one energy");
    for (const auto& f : o.families)
        if (f != "square_well" && f != "spike_lattice" && f != "random_step")
            throw ConfigError("families", "unknown sweep family '" + f + "'");

    std::vector<Scenario> out;
    const std::size_t ne = o.energies.size();
    const std::size_t nf = o.families.size();
    for (int i = 0; i < o.n_scenarios; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        const std::string& family = o.families[(idx / ne) % nf];
        Scenario s;
        s.energy = o.energies[idx % ne];
        s.seed = splitmix64(o.seed * 1000003ULL + idx);
        std::mt19937_64 rng(s.seed);
        const auto uniform = [&rng](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };

        const double length = o.span_length;
        if (family == "square_well") {
            SquareWellParams p;
            p.depth = uniform(0.5, 10.0);
            p.width = uniform(0.5, 4.0);
            p.offset = 0.5 * (length - p.width);
            s.potential = make_family(p);
        } else if (family == "spike_lattice") {
            SpikeLatticeParams p;
            p.g = uniform(0.5, 7.5);
            p.period = 1.0;
            p.cap = 100.0;
            p.cell = 1e-3;
            p.start = 0.0;
            p.end = length;
            s.potential = make_family(p);
        } else {
            RandomStepParams p;
            p.cells = static_cast<int>(std::uniform_int_distribution<int>(10, 30)(rng));
            p.value_min = -5.0;
            p.value_max = 5.0;
            p.width_min = 0.2;
            p.width_max = 0.8;
            s.potential = make_family(p, rng());
        }

        char id[64];
        std::snprintf(id, sizeof id, "sweep-%03d-%s", i, family.c_str());
        s.id = id;
        s.span_a = 0.0;
        s.span_b = length;
        s.init.x0 = 0.0;
        if (s.energy.is_real()) {
            s.init.u0 = uniform(-1.0, 1.0);
            s.init.du0 = uniform(-1.0, 1.0);
        } else {
            s.init.u0 = {uniform(-1.0, 1.0), uniform(-1.0, 1.0)};
            s.init.du0 = {uniform(-1.0, 1.0), uniform(-1.0, 1.0)};
        }
        const auto k = constants_for(c1_sup(s.potential).supremum, s.energy);
        s.max_step = std::min(1e-2, k.delta / 20.0);

        const auto check = [](std::string name, double p = 2.0) {
            CheckSpec c;
            c.name = std::move(name);
            c.p = p;
            return c;
        };
        s.checks.push_back(check("derivative_bound"));
        s.checks.push_back(check("persistence"));
        for (double p : {1.0, 2.0}) {
            s.checks.push_back(check("local_lp", p));
            s.checks.push_back(check("derivative_lp", p));
        }
        s.checks.push_back(check("lemma31"));
        s.checks.back().samples = o.lemma_samples;
        if (s.energy.is_real() && s.energy.re > 0.0)
            s.checks.push_back(check("prufer"));
        out.push_back(std::move(s));
    }
    return out;
}

SuiteReport random_sweep(const SweepOptions& options) {
    return run_all("random_sweep", options.seed, std::nullopt, sweep_scenarios(options));
}

int exit_code(const SuiteReport& report) {
    for (const auto& s : report.scenarios)
        if (s.status != ScenarioStatus::pass && s.status != ScenarioStatus::expected_fail)
            return 1;
    return 0;
}

namespace {

ordered_json outcome_json(const CheckOutcome& o) {
    ordered_json j;
    j["name"] = o.name;
    j["points_checked"] = o.points_checked;
    j["worst_ratio"] = o.worst_ratio;
    j["witness_x"] = o.witness_x;
    j["pass"] = o.pass;
    j["tolerance"] = o.tolerance;
    j["margin_notes"] = o.margin_notes;
    return j;
}

} // namespace

std::string outcomes_to_json(const std::vector<CheckOutcome>& outcomes) {
    ordered_json arr = ordered_json::array();
    for (const auto& o : outcomes)
        arr.push_back(outcome_json(o));
    return arr.dump(2);
}

std::string report_to_json(const SuiteReport& report, bool include_wall_time) {
    ordered_json doc;
    doc["tool"] = "schro1d";
    doc["version"] = tool_version;
    doc["suite"] = report.suite;
    doc["corpus_seed"] = report.corpus_seed;
    doc["c2_floor"] = report.c2_floor ? ordered_json(*report.c2_floor) : ordered_json(nullptr);

    std::map<std::string, int> counts{{"pass", 0}, {"fail", 0}, {"expected_fail", 0}, {"unexpected_pass", 0}, {"error", 0}};
    ordered_json scenarios = ordered_json::array();
    for (const auto& s : report.scenarios) {
        ++counts[to_string(s.status)];
        ordered_json j;
        j["id"] = s.id;
        j["expected"] = s.expected == Expectation::pass ? "pass" : "expected_fail";
        j["status"] = to_string(s.status);
        j["method"] = s.method;
        j["trace_points"] = s.trace_points;
        j["potential"] = {{"interval", {s.potential_left, s.potential_right}},
                          {"discretization_surrogate", s.discretization_surrogate}};
        const auto& k = s.constants;
        j["constants"] = {{"c1", k.c1},       {"c1_argmax", s.c1_argmax},
                          {"energy", {{"re", k.e.re}, {"im", k.e.im}}},
                          {"c2", k.c2},       {"C", k.c_bound},
                          {"K", k.k_radius},  {"delta", k.delta},
                          {"c2_floor_applied", s.c2_floor_applied}};
        ordered_json checks = ordered_json::array();
        for (const auto& o : s.outcomes)
            checks.push_back(outcome_json(o));
        j["checks"] = std::move(checks);
        if (!s.error.empty())
            j["error"] = s.error;
        scenarios.push_back(std::move(j));
    }
    doc["summary"] = {{"scenarios", report.scenarios.size()},
                      {"passed", counts["pass"]},
                      {"failed", counts["fail"]},
                      {"expected_fail", counts["expected_fail"]},
                      {"unexpected_pass", counts["unexpected_pass"]},
                      {"errors", counts["error"]}};
    doc["scenarios"] = std::move(scenarios);
    if (include_wall_time)
        doc["wall_time_seconds"] = report.wall_time_seconds;
    return doc.dump(2);
}

} // namespace schro1d
