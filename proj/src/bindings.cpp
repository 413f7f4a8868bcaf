// Python bindings: the main operations (presets, simulation, condition
// checks, orbit location, the Lyapunov monitor) exposed as plain
// dict/list-returning functions.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "perilotka/analysis.hpp"
#include "perilotka/orbits.hpp"
#include "perilotka/output.hpp"
#include "perilotka/scenario.hpp"

namespace py = pybind11;
using namespace perilotka;

namespace {

const IntegratorConfig kVerification{1e-12, 1e-14};

py::object json_to_py(const nlohmann::json& j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

py::dict trajectory_to_dict(const Trajectory& traj, double dt) {
    std::vector<double> ts;
    std::vector<std::vector<double>> columns(traj.dimension());
    std::vector<double> state(traj.dimension());
    for (double t = traj.t_begin();; t += dt) {
        if (t > traj.t_end()) t = traj.t_end();
        traj.sample_into(t, state);
        ts.push_back(t);
        for (std::size_t i = 0; i < traj.dimension(); ++i) columns[i].push_back(state[i]);
        if (t >= traj.t_end()) break;
    }
    py::dict out;
    out["t"] = ts;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        out[py::str("x" + std::to_string(i + 1))] = columns[i];
    }
    return out;
}

State guess_from(const ScenarioConfig& config, OrbitMode mode,
                 const std::optional<std::vector<double>>& guess) {
    if (guess) {
        if (guess->size() != 3) throw std::invalid_argument("guess must have three components");
        return State{(*guess)[0], (*guess)[1], (*guess)[2]};
    }
    State seed = config.initial;
    if (mode == OrbitMode::boundary) seed.x3 = 0.0;
    if (mode == OrbitMode::logistic1) seed = State{config.initial.x1, 0.0, 0.0};
    if (mode == OrbitMode::logistic2) seed = State{0.0, config.initial.x2, 0.0};
    return default_guess(config.coefficients, mode, seed);
}

}  // namespace

PYBIND11_MODULE(_perilotka, m) {
    m.doc() = "periodically forced two-prey/one-predator model: simulation, periodic orbits, "
              "and existence/stability condition checks";

    py::class_<ScenarioConfig>(m, "ScenarioConfig")
        .def_property_readonly("omega",
                               [](const ScenarioConfig& c) { return c.coefficients.omega(); })
        .def_property_readonly("horizon", [](const ScenarioConfig& c) { return c.horizon; })
        .def_property_readonly("initial",
                               [](const ScenarioConfig& c) {
                                   return std::vector<double>{c.initial.x1, c.initial.x2,
                                                              c.initial.x3};
                               })
        .def("to_json", [](const ScenarioConfig& c) { return json_to_py(scenario_to_json(c)); })
        .def("__repr__", [](const ScenarioConfig& c) {
            return "<ScenarioConfig omega=" + std::to_string(c.coefficients.omega()) +
                   " horizon=" + std::to_string(c.horizon) + ">";
        });

    m.def("preset", &preset, py::arg("name"),
          "Built-in experiment configuration ('fig1' or 'fig2').");

    m.def("load_config", &load_scenario, py::arg("path"), "Load a scenario config file (JSON).");

    m.def(
        "config_from_json",
        [](const std::string& text) { return scenario_from_json(nlohmann::json::parse(text)); },
        py::arg("text"), "Parse a scenario config from a JSON string.");

    m.def(
        "simulate",
        [](const ScenarioConfig& config, std::optional<double> t_end,
           std::optional<int> samples_per_period) {
            const double horizon = t_end.value_or(config.horizon);
            const int spp = samples_per_period.value_or(config.output.samples_per_period);
            const double x0[3] = {config.initial.x1, config.initial.x2, config.initial.x3};
            const Trajectory traj =
                integrate(full_ode(config.coefficients), 0.0, x0, horizon, config.integrator);
            py::dict out = trajectory_to_dict(traj, config.coefficients.omega() / spp);
            out["steps"] = traj.steps();
            return out;
        },
        py::arg("config"), py::arg("t_end") = py::none(),
        py::arg("samples_per_period") = py::none(),
        "Integrate from the configured initial state; returns sampled series.");

    m.def(
        "check",
        [](const ScenarioConfig& config) {
            const CoefficientSet& p = config.coefficients;
            const BoundaryStability stability = boundary_stability_condition(p);
            py::dict out;
            out["existence_bounds"] = json_to_py(to_json(existence_bounds(p)));
            out["existence_conditions"] = json_to_py(to_json(existence_conditions(p)));
            out["boundary_coexistence"] = json_to_py(to_json(boundary_coexistence_conditions(p)));
            out["boundary_stability"] = json_to_py(to_json(stability.report));
            out["attraction_conditions"] =
                json_to_py(to_json(attraction_conditions(p, stability.orbit)));
            return out;
        },
        py::arg("config"), "Evaluate every existence/stability condition set.");

    m.def(
        "find_orbit",
        [](const ScenarioConfig& config, const std::string& mode,
           std::optional<std::vector<double>> guess, double tol) {
            const OrbitMode m_ = mode_from_name(mode);
            OrbitSolveOptions opts;
            opts.tol = tol;
            const PeriodicOrbit orbit =
                find_orbit(config.coefficients, guess_from(config, m_, guess), m_, opts);
            return json_to_py(orbit_to_json(orbit));
        },
        py::arg("config"), py::arg("mode") = "full", py::arg("guess") = py::none(),
        py::arg("tol") = 1e-9,
        "Locate a periodic orbit; the guess defaults to a settled forward integration.");

    m.def(
        "lyapunov",
        [](const ScenarioConfig& config, std::optional<double> t_end) {
            const CoefficientSet& p = config.coefficients;
            OrbitSolveOptions opts;
            opts.integrator = kVerification;
            State seed = config.initial;
            seed.x3 = 0.0;
            const PeriodicOrbit orbit =
                find_orbit(p, default_guess(p, OrbitMode::boundary, seed, 40, kVerification),
                           OrbitMode::boundary, opts);
            const double x0[3] = {config.initial.x1, config.initial.x2, config.initial.x3};
            const Trajectory traj =
                integrate(full_ode(p), 0.0, x0, t_end.value_or(config.horizon), kVerification);
            const AttractionReport rep = verify_attraction(
                traj, orbit, p, static_cast<std::size_t>(config.output.samples_per_period));
            py::dict out;
            out["t"] = rep.times;
            out["V"] = rep.v;
            out["delta"] = rep.delta;
            out["bound"] = rep.bound;
            out["upward_drift"] = rep.upward_drift;
            out["v_nonincreasing"] = rep.v_nonincreasing;
            out["terminal_delta"] = rep.terminal_delta;
            out["max_fd_violation"] = rep.max_fd_violation;
            out["fd_check_passed"] = rep.fd_check_passed;
            out["orbit_anchor"] = orbit.anchor;
            out["orbit_residual"] = orbit.residual;
            return out;
        },
        py::arg("config"), py::arg("t_end") = py::none(),
        "Monitor the distance functional along a run against the predator-free orbit.");

    m.attr("__version__") = "0.1.0";
}
