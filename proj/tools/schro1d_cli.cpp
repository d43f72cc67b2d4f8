// schro1d command-line front end.
//
// Exit codes: 0 success / all scenarios as expected, 1 unexpected failure or
// numerical error, 2 configuration or usage error.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "schro1d/errors.hpp"
#include "schro1d/harness.hpp"
#include "schro1d/spectral.hpp"

namespace {

using namespace schro1d;
using nlohmann::ordered_json;

constexpr int exit_config = 2;

std::string read_text(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError(path, "cannot open file");
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

// --potential accepts a file path or an inline JSON document.
PiecewisePotential load_potential(const std::string& arg, std::uint64_t seed) {
    const auto first = arg.find_first_not_of(" \t\n");
    const bool inline_json = first != std::string::npos && arg[first] == '{';
    return parse_potential(inline_json ? arg : read_text(arg), seed);
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text << '\n';
        return;
    }
    std::ofstream out(out_path);
    if (!out)
        throw ConfigError(out_path, "cannot write output file");
    out << text << '\n';
}

template <class Writer>
void write_csv(const std::string& path, Writer&& writer) {
    if (path.empty())
        return;
    std::ofstream out(path);
    if (!out)
        throw ConfigError(path, "cannot write CSV file");
    writer(out);
}

ordered_json complex_json(cplx z) { return ordered_json{{"re", z.real()}, {"im", z.imag()}}; }

struct ProblemArgs {
    std::string potential;
    double energy_re = 1.0;
    double energy_im = 0.0;
    double x0 = 0.0;
    double u0_re = 0.0, u0_im = 0.0;
    double du0_re = 1.0, du0_im = 0.0;
    double to = 10.0;
    double max_step = 1e-3;
    std::uint64_t seed = 0;
    std::string csv;
    std::string out;

    Energy energy() const { return {energy_re, energy_im}; }
    InitialData init() const { return {x0, {u0_re, u0_im}, {du0_re, du0_im}}; }
};

void add_potential_options(CLI::App* app, ProblemArgs& a) {
    app->add_option("--potential", a.potential, "potential JSON file or inline document")->required();
    app->add_option("--seed", a.seed, "seed for random potential families");
    app->add_option("--out", a.out, "write the JSON summary here instead of stdout");
}

void add_energy_options(CLI::App* app, ProblemArgs& a) {
    app->add_option("--energy", a.energy_re, "real part of E");
    app->add_option("--energy-im", a.energy_im, "imaginary part of E");
    app->add_option("--max-step", a.max_step, "maximum grid step")->check(CLI::PositiveNumber);
}

void add_solution_options(CLI::App* app, ProblemArgs& a) {
    app->add_option("--x0", a.x0, "initial abscissa");
    app->add_option("--u0", a.u0_re, "Re u(x0)");
    app->add_option("--u0-im", a.u0_im, "Im u(x0)");
    app->add_option("--du0", a.du0_re, "Re u'(x0)");
    app->add_option("--du0-im", a.du0_im, "Im u'(x0)");
    app->add_option("--to", a.to, "propagate to this abscissa");
}

int cmd_c1(const ProblemArgs& a) {
    const auto v = load_potential(a.potential, a.seed);
    const auto profile = c1_sup(v);
    ordered_json j{{"c1", profile.supremum},
                   {"argmax", profile.argmax},
                   {"interval", {v.left(), v.right()}},
                   {"cells", v.cell_count()},
                   {"candidates", profile.candidates.size()}};
    emit(j.dump(2), a.out);
    return 0;
}

int cmd_solve(const ProblemArgs& a, const std::string& method) {
    const auto v = load_potential(a.potential, a.seed);
    const auto trace = method == "rk4" ? propagate_rk(v, a.energy(), a.init(), a.to, a.max_step)
                                       : propagate_exact(v, a.energy(), a.init(), a.to, a.max_step);
    write_csv(a.csv, [&](std::ostream& o) { write_trace_csv(o, trace); });
    ordered_json j{{"method", to_string(trace.method)},
                   {"energy", complex_json(a.energy().value())},
                   {"points", trace.size()},
                   {"from", trace.xs.front()},
                   {"to", trace.xs.back()},
                   {"u_end", complex_json(a.to >= a.x0 ? trace.u.back() : trace.u.front())},
                   {"du_end", complex_json(a.to >= a.x0 ? trace.du.back() : trace.du.front())}};
    emit(j.dump(2), a.out);
    return 0;
}

int cmd_simon_stolz(const ProblemArgs& a, bool frobenius) {
    const auto v = load_potential(a.potential, a.seed);
    const auto curve = frobenius ? simon_stolz_curve_frobenius(v, a.energy(), a.to, a.max_step)
                                 : simon_stolz_curve(v, a.energy(), a.to, a.max_step);
    write_csv(a.csv, [&](std::ostream& o) { write_curve_csv(o, curve); });
    ordered_json j{{"norm", frobenius ? "frobenius" : "operator"},
                   {"x_max", curve.xs.back()},
                   {"points", curve.xs.size()},
                   {"cumulative", curve.cumulative.back()}};
    if (curve.xs.size() >= 4)
        j["tail_loglog_slope"] = curve.tail_loglog_slope();
    emit(j.dump(2), a.out);
    return 0;
}

int cmd_prufer(const ProblemArgs& a) {
    if (a.energy_im != 0.0 || !(a.energy_re > 0.0))
        throw InvalidArgument("prufer needs a real energy E = k^2 > 0");
    const auto v = load_potential(a.potential, a.seed);
    const auto trace = propagate_exact(v, a.energy(), a.init(), a.to, a.max_step);
    const double k = std::sqrt(a.energy_re);
    const auto prufer = prufer_decompose(trace, k);
    write_csv(a.csv, [&](std::ostream& o) { write_prufer_csv(o, prufer); });
    ordered_json j{{"k", k},
                   {"points", prufer.xs.size()},
                   {"theta_start", prufer.theta.front()},
                   {"theta_end", prufer.theta.back()},
                   {"identity_residual", prufer_identity_residual(prufer, trace)},
                   {"integral_residual", prufer_integral_residual(prufer, trace)}};
    emit(j.dump(2), a.out);
    return 0;
}

int finish_report(const SuiteReport& report, const std::string& out) {
    emit(report_to_json(report), out);
    std::size_t ok = 0;
    for (const auto& s : report.scenarios)
        if (s.status == ScenarioStatus::pass || s.status == ScenarioStatus::expected_fail)
            ++ok;
    std::cerr << report.suite << ": " << ok << "/" << report.scenarios.size() << " scenarios as expected\n";
    for (const auto& s : report.scenarios)
        if (s.status != ScenarioStatus::pass && s.status != ScenarioStatus::expected_fail)
            std::cerr << "  " << s.id << ": " << to_string(s.status) << (s.error.empty() ? "" : " (" + s.error + ")")
                      << '\n';
    return exit_code(report);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"schro1d: 1D Schrodinger solver and eigenfunction-estimate verifier"};
    app.set_version_flag("--version", std::string(tool_version));
    app.require_subcommand(1);

    ProblemArgs a;
    std::string method = "exact_cell";
    bool frobenius = false;

    auto* c1 = app.add_subcommand("c1", "sup of the unit-window integral of the negative part of V");
    add_potential_options(c1, a);

    auto* solve = app.add_subcommand("solve", "propagate a solution and optionally write it as CSV");
    add_potential_options(solve, a);
    add_energy_options(solve, a);
    add_solution_options(solve, a);
    solve->add_option("--method", method, "exact_cell or rk4")->check(CLI::IsMember({"exact_cell", "rk4"}));
    solve->add_option("--csv", a.csv, "trace CSV (x,re_u,im_u,re_du,im_du)");

    auto* ss = app.add_subcommand("simon-stolz", "cumulative integral of 1/||T(E,x,0)||^2 on [0, --to]");
    add_potential_options(ss, a);
    add_energy_options(ss, a);
    ss->add_option("--to", a.to, "upper limit X");
    ss->add_flag("--frobenius", frobenius, "use the Frobenius norm instead of the operator norm");
    ss->add_option("--csv", a.csv, "curve CSV (x,norm_T,integrand,cumulative)");

    auto* pr = app.add_subcommand("prufer", "Prufer decomposition of a real solution at E = k^2 > 0");
    add_potential_options(pr, a);
    add_energy_options(pr, a);
    add_solution_options(pr, a);
    pr->add_option("--csv", a.csv, "Prufer CSV (x,R,theta)");

    std::string config, out, csv_dir;
    std::optional<std::uint64_t> seed;
    std::optional<double> max_step, c2_floor;
    auto* verify = app.add_subcommand("verify", "run a scenario suite and write the JSON report");
    verify->add_option("--config", config, "suite JSON")->required();
    verify->add_option("--out", out, "report path (stdout if omitted)");
    verify->add_option("--seed", seed, "corpus seed override");
    verify->add_option("--max-step", max_step, "grid step override for every scenario")->check(CLI::PositiveNumber);
    verify->add_option("--c2-floor", c2_floor, "floor for C2 in degenerate cases")->check(CLI::PositiveNumber);
    verify->add_option("--csv-dir", csv_dir, "write one trace CSV per scenario into this directory");

    SweepOptions sweep_opts;
    std::string families;
    auto* sweep = app.add_subcommand("sweep", "randomised scenarios over the potential families");
    sweep->add_option("--n", sweep_opts.n_scenarios, "number of scenarios")->check(CLI::PositiveNumber);
    sweep->add_option("--seed", sweep_opts.seed, "sweep seed");
    sweep->add_option("--samples", sweep_opts.lemma_samples, "lemma samples per scenario")
        ->check(CLI::PositiveNumber);
    sweep->add_option("--families", families, "comma-separated family names");
    sweep->add_option("--out", out, "report path (stdout if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_config;
    }

    try {
        if (c1->parsed())
            return cmd_c1(a);
        if (solve->parsed())
            return cmd_solve(a, method);
        if (ss->parsed())
            return cmd_simon_stolz(a, frobenius);
        if (pr->parsed())
            return cmd_prufer(a);
        if (verify->parsed()) {
            auto suite = load_suite(config);
            if (seed)
                suite.seed = *seed;
            if (c2_floor)
                suite.c2_floor = c2_floor;
            if (max_step)
                for (auto& s : suite.scenarios)
                    s.max_step = *max_step;
            const int code = finish_report(run_suite(suite), out);
            if (!csv_dir.empty()) {
                std::filesystem::create_directories(csv_dir);
                for (const auto& s : suite.scenarios) {
                    try {
                        const auto trace = solve_scenario(s);
                        write_csv((std::filesystem::path(csv_dir) / (s.id + ".csv")).string(),
                                  [&](std::ostream& o) { write_trace_csv(o, trace); });
                    } catch (const ConfigError&) {
                        throw;
                    } catch (const Error&) {
                        // already reported as a scenario error
                    }
                }
            }
            return code;
        }
        if (sweep->parsed()) {
            if (!families.empty()) {
                sweep_opts.families.clear();
                std::stringstream s(families);
                for (std::string f; std::getline(s, f, ',');)
                    sweep_opts.families.push_back(f);
            }
            return finish_report(random_sweep(sweep_opts), out);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return exit_config;
}
