// perilotka: simulate the periodically forced two-prey/one-predator model,
// locate its periodic orbits, and evaluate the existence/stability
// conditions from the analysis toolkit.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "perilotka/analysis.hpp"
#include "perilotka/orbits.hpp"
#include "perilotka/output.hpp"
#include "perilotka/scenario.hpp"

namespace {

using namespace perilotka;
namespace fs = std::filesystem;

// Tolerances used by the Lyapunov verification pipeline: the monitor judges
// 1e-6-scale claims, so it runs well below them.
const IntegratorConfig kVerification{1e-12, 1e-14};

struct CommonArgs {
    std::string config_path;
    std::string preset_name;
    std::string out_dir = ".";
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    auto* config = cmd->add_option("--config", args.config_path, "scenario config file (JSON)");
    auto* pre = cmd->add_option("--preset", args.preset_name, "built-in scenario: fig1 or fig2");
    config->excludes(pre);
    cmd->add_option("--out", args.out_dir, "output directory (created if missing)");
}

ScenarioConfig resolve_scenario(const CommonArgs& args) {
    if (!args.config_path.empty()) return load_scenario(args.config_path);
    if (!args.preset_name.empty()) return preset(args.preset_name);
    throw ConfigError("<args>", "either --config or --preset is required");
}

std::string out_path(const CommonArgs& args, const std::string& name) {
    fs::create_directories(args.out_dir);
    return (fs::path(args.out_dir) / name).string();
}

void finish_record(RunRecord& record, const CommonArgs& args, const ScenarioConfig& config,
                   std::chrono::steady_clock::time_point started) {
    record.config_echo = scenario_to_json(config);
    record.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    const std::string path = out_path(args, "run.json");
    std::ofstream out(path, std::ios::binary);
    out << record.to_json().dump(2) << "\n";
}

std::vector<ChartSeries> trajectory_series(const Trajectory& traj, double dt) {
    std::vector<ChartSeries> series(traj.dimension());
    for (std::size_t i = 0; i < traj.dimension(); ++i) series[i].label = "x" + std::to_string(i + 1);
    std::vector<double> state(traj.dimension());
    for (double t = traj.t_begin();; t += dt) {
        if (t > traj.t_end()) t = traj.t_end();
        traj.sample_into(t, state);
        for (std::size_t i = 0; i < traj.dimension(); ++i) {
            series[i].x.push_back(t);
            series[i].y.push_back(state[i]);
        }
        if (t >= traj.t_end()) break;
    }
    return series;
}

int cmd_simulate(const CommonArgs& args, double t_end_opt) {
    const auto started = std::chrono::steady_clock::now();
    const ScenarioConfig config = resolve_scenario(args);
    const double t_end = t_end_opt > 0.0 ? t_end_opt : config.horizon;
    const double dt = config.coefficients.omega() / config.output.samples_per_period;

    RunRecord record;
    record.command = "simulate";

    const double x0[3] = {config.initial.x1, config.initial.x2, config.initial.x3};
    Trajectory traj;
    try {
        traj = integrate(full_ode(config.coefficients), 0.0, x0, t_end, config.integrator);
    } catch (const IntegrationError& err) {
        const std::string csv = out_path(args, "trajectory.csv");
        write_trajectory_csv(csv, err.partial(), dt);
        record.outputs.push_back(csv);
        record.scalars["t_reached"] = err.partial().t_end();
        finish_record(record, args, config, started);
        std::cerr << "integration failed: " << err.what() << " (partial trajectory written)\n";
        return 2;
    }

    const std::string csv = out_path(args, "trajectory.csv");
    write_trajectory_csv(csv, traj, dt);
    record.outputs.push_back(csv);

    const std::string svg = out_path(args, "trajectory.svg");
    write_text_file(svg, line_chart_svg("population densities", "t", trajectory_series(traj, dt)));
    record.outputs.push_back(svg);

    const auto end = traj.state_at(traj.steps());
    record.scalars["t_end"] = traj.t_end();
    record.scalars["x1_end"] = end[0];
    record.scalars["x2_end"] = end[1];
    record.scalars["x3_end"] = end[2];
    record.scalars["steps"] = static_cast<double>(traj.steps());
    finish_record(record, args, config, started);

    std::cout << "simulated to t=" << format_full(traj.t_end()) << ": x=("
              << format_full(end[0]) << ", " << format_full(end[1]) << ", " << format_full(end[2])
              << ")\n  wrote " << csv << "\n";
    return 0;
}

int cmd_check(const CommonArgs& args) {
    const auto started = std::chrono::steady_clock::now();
    const ScenarioConfig config = resolve_scenario(args);
    const CoefficientSet& p = config.coefficients;

    RunRecord record;
    record.command = "check";

    const ExistenceBounds bounds = existence_bounds(p);
    const ConditionReport existence = existence_conditions(p);
    const ConditionReport coexistence = boundary_coexistence_conditions(p);
    const BoundaryStability stability = boundary_stability_condition(p);
    const StabilityReport attraction = attraction_conditions(p, stability.orbit);

    std::cout << to_text(existence) << "\n"
              << to_text(coexistence) << "\n"
              << to_text(stability.report) << "\n"
              << to_text(attraction);

    record.reports["existence_bounds"] = to_json(bounds);
    record.reports["existence_conditions"] = to_json(existence);
    record.reports["boundary_coexistence"] = to_json(coexistence);
    record.reports["boundary_stability"] = to_json(stability.report);
    record.reports["attraction_conditions"] = to_json(attraction);
    record.scalars["interaction_excess_mean"] = stability.interaction_excess_mean;
    record.scalars["decay_margin"] = attraction.decay_margin;
    finish_record(record, args, config, started);
    return 0;
}

int cmd_orbit(const CommonArgs& args, const std::string& mode_str, const std::string& guess_str,
              double tol) {
    const auto started = std::chrono::steady_clock::now();
    const ScenarioConfig config = resolve_scenario(args);
    const CoefficientSet& p = config.coefficients;
    const OrbitMode mode = mode_from_name(mode_str);

    State guess;
    if (!guess_str.empty()) {
        double g[3];
        std::istringstream in(guess_str);
        char comma;
        if (!(in >> g[0] >> comma >> g[1] >> comma >> g[2])) {
            throw ConfigError("--guess", "expected three comma-separated numbers");
        }
        guess = State{g[0], g[1], g[2]};
    } else {
        State seed = config.initial;
        if (mode == OrbitMode::boundary) seed.x3 = 0.0;
        if (mode == OrbitMode::logistic1) seed = State{config.initial.x1, 0.0, 0.0};
        if (mode == OrbitMode::logistic2) seed = State{0.0, config.initial.x2, 0.0};
        guess = default_guess(p, mode, seed);
    }

    OrbitSolveOptions opts;
    opts.tol = tol;

    RunRecord record;
    record.command = "orbit";

    PeriodicOrbit orbit;
    try {
        orbit = find_orbit(p, guess, mode, opts);
    } catch (const OrbitSolveError& err) {
        std::cerr << "orbit solve failed: " << err.what() << "\n  best iterate:";
        for (double v : err.best_iterate()) std::cerr << " " << format_full(v);
        std::cerr << "\n  residual " << format_full(err.residual()) << "\n";
        record.scalars["residual"] = err.residual();
        finish_record(record, args, config, started);
        return 2;
    }

    const std::string csv = out_path(args, "orbit.csv");
    write_trajectory_csv(csv, orbit.trajectory, orbit.omega / config.output.samples_per_period);
    record.outputs.push_back(csv);

    std::cout << orbit_to_text(orbit) << "  wrote " << csv << "\n";
    record.reports["orbit"] = orbit_to_json(orbit);
    record.scalars["residual"] = orbit.residual;
    finish_record(record, args, config, started);
    return 0;
}

int cmd_lyapunov(const CommonArgs& args, double t_end_opt) {
    const auto started = std::chrono::steady_clock::now();
    const ScenarioConfig config = resolve_scenario(args);
    const CoefficientSet& p = config.coefficients;
    const double t_end = t_end_opt > 0.0 ? t_end_opt : config.horizon;

    RunRecord record;
    record.command = "lyapunov";

    OrbitSolveOptions opts;
    opts.integrator = kVerification;
    PeriodicOrbit orbit;
    try {
        State seed = config.initial;
        seed.x3 = 0.0;
        orbit = find_orbit(p, default_guess(p, OrbitMode::boundary, seed, 40, kVerification),
                           OrbitMode::boundary, opts);
    } catch (const OrbitSolveError& err) {
        std::cerr << "predator-free orbit solve failed: " << err.what() << "\n";
        finish_record(record, args, config, started);
        return 2;
    }

    const double x0[3] = {config.initial.x1, config.initial.x2, config.initial.x3};
    const Trajectory traj = integrate(full_ode(p), 0.0, x0, t_end, kVerification);
    const AttractionReport report = verify_attraction(
        traj, orbit, p, static_cast<std::size_t>(config.output.samples_per_period));

    const std::string csv = out_path(args, "lyapunov.csv");
    write_lyapunov_csv(csv, report);
    record.outputs.push_back(csv);

    std::vector<ChartSeries> series(2);
    series[0].label = "V";
    series[0].x = report.times;
    series[0].y = report.v;
    series[1].label = "delta";
    series[1].x = report.times;
    series[1].y = report.delta;
    const std::string svg = out_path(args, "lyapunov.svg");
    write_text_file(svg, line_chart_svg("distance to the predator-free orbit", "t", series));
    record.outputs.push_back(svg);

    record.scalars["v_initial"] = report.v.front();
    record.scalars["v_terminal"] = report.v.back();
    record.scalars["upward_drift"] = report.upward_drift;
    record.scalars["max_upward_increment"] = report.max_upward_increment;
    record.scalars["v_nonincreasing"] = report.v_nonincreasing ? 1.0 : 0.0;
    record.scalars["terminal_delta"] = report.terminal_delta;
    record.scalars["max_fd_violation"] = report.max_fd_violation;
    record.scalars["fd_check_passed"] = report.fd_check_passed ? 1.0 : 0.0;
    record.scalars["orbit_residual"] = orbit.residual;
    finish_record(record, args, config, started);

    std::cout << "V(" << format_full(report.times.front()) << ")=" << format_full(report.v.front())
              << "  V(" << format_full(report.times.back()) << ")=" << format_full(report.v.back())
              << "\n  upward drift " << format_full(report.upward_drift) << " ("
              << (report.v_nonincreasing ? "nonincreasing" : "NOT nonincreasing")
              << ")\n  terminal deviation " << format_full(report.terminal_delta)
              << "\n  decrement check " << (report.fd_check_passed ? "passed" : "FAILED")
              << " (max violation " << format_full(report.max_fd_violation) << ")\n  wrote " << csv
              << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"simulator and verification toolkit for a periodically forced "
                 "two-prey/one-predator system"};
    app.require_subcommand(1);

    CommonArgs sim_args, check_args, orbit_args, lyap_args;
    double sim_t_end = 0.0, lyap_t_end = 0.0, orbit_tol = 1e-9;
    std::string orbit_mode, orbit_guess;

    CLI::App* sim = app.add_subcommand("simulate", "integrate the system and write CSV/SVG");
    add_common(sim, sim_args);
    sim->add_option("--t-end", sim_t_end, "simulation horizon (default: config horizon)");

    CLI::App* check = app.add_subcommand("check", "evaluate every existence/stability condition");
    add_common(check, check_args);

    CLI::App* orbit = app.add_subcommand("orbit", "locate a periodic orbit via the period map");
    add_common(orbit, orbit_args);
    orbit->add_option("--mode", orbit_mode, "full | boundary | logistic-1 | logistic-2")
        ->required();
    orbit->add_option("--guess", orbit_guess, "anchor guess as x1,x2,x3");
    orbit->add_option("--tol", orbit_tol, "fixed-point residual tolerance");

    CLI::App* lyap = app.add_subcommand("lyapunov", "monitor the distance to the predator-free orbit");
    add_common(lyap, lyap_args);
    lyap->add_option("--t-end", lyap_t_end, "monitor horizon (default: config horizon)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(sim_args, sim_t_end);
        if (check->parsed()) return cmd_check(check_args);
        if (orbit->parsed()) return cmd_orbit(orbit_args, orbit_mode, orbit_guess, orbit_tol);
        if (lyap->parsed()) return cmd_lyapunov(lyap_args, lyap_t_end);
    } catch (const ConfigError& err) {
        std::cerr << "config error at " << err.field() << ": " << err.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& err) {
        std::cerr << "invalid input: " << err.what() << "\n";
        return 1;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    }
    return 0;
}
