#include "perilotka/scenario.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

namespace perilotka {

namespace {

constexpr double kOmega = std::numbers::pi / 4.0;  // period of the preset forcing

PeriodicCoefficient wave(double mean, double sin_amp, double cos_amp, const char* name) {
    std::vector<Harmonic> harmonics;
    if (sin_amp != 0.0 || cos_amp != 0.0) harmonics.push_back({1, sin_amp, cos_amp});
    return PeriodicCoefficient(kOmega, mean, std::move(harmonics), name);
}

CoefficientSet preset_coefficients(bool boundary_attracting) {
    // The second experiment raises predator mortality and prey handling
    // saturation; everything else is shared.
    const PeriodicCoefficient a3 = boundary_attracting ? wave(4.0, 0.0, -0.3, "a3")
                                                       : wave(0.4, 0.0, -0.3, "a3");
    const PeriodicCoefficient beta = boundary_attracting ? wave(3.0, 0.0, 0.2, "beta")
                                                         : wave(0.3, 0.0, 0.2, "beta");
    return CoefficientSet(wave(3.0, 1.0, 0.0, "a1"), wave(5.5, 0.0, -0.2, "a2"), a3,
                          wave(2.0, 0.0, 1.0, "b11"), wave(0.04, -0.02, 0.0, "b12"),
                          wave(0.15, 0.0, -0.1, "b21"), wave(5.0, 0.4, 0.0, "b22"),
                          wave(0.5, -0.4, 0.0, "c1"), wave(0.4, -0.3, 0.0, "c2"),
                          wave(3.0, 2.0, 0.0, "d1"), wave(3.0, -2.0, 0.0, "d2"),
                          wave(0.03, 0.0, -0.02, "alpha"), beta, wave(2.0, -1.0, 0.0, "gamma"));
}

nlohmann::json coefficient_to_json(const PeriodicCoefficient& c) {
    nlohmann::json j;
    j["omega"] = c.omega();
    j["mean"] = c.mean_term();
    j["harmonics"] = nlohmann::json::array();
    for (const Harmonic& h : c.harmonics()) {
        j["harmonics"].push_back({{"k", h.k}, {"sin", h.sin_amp}, {"cos", h.cos_amp}});
    }
    return j;
}

double require_number(const nlohmann::json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(path, "expected a number");
    return j.get<double>();
}

PeriodicCoefficient coefficient_from_json(const nlohmann::json& j, const std::string& path,
                                          const std::string& name, double default_omega) {
    if (!j.is_object()) throw ConfigError(path, "expected an object");
    double omega = default_omega;
    if (j.contains("omega")) omega = require_number(j.at("omega"), path + ".omega");
    if (!(omega > 0.0)) throw ConfigError(path + ".omega", "period must be positive");
    if (!j.contains("mean")) throw ConfigError(path + ".mean", "missing");
    const double mean = require_number(j.at("mean"), path + ".mean");

    std::vector<Harmonic> harmonics;
    if (j.contains("harmonics")) {
        const auto& arr = j.at("harmonics");
        if (!arr.is_array()) throw ConfigError(path + ".harmonics", "expected an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string hp = path + ".harmonics[" + std::to_string(i) + "]";
            const auto& h = arr.at(i);
            if (!h.is_object()) throw ConfigError(hp, "expected an object");
            Harmonic out;
            if (h.contains("k")) {
                if (!h.at("k").is_number_integer()) throw ConfigError(hp + ".k", "expected an integer");
                out.k = h.at("k").get<int>();
                if (out.k < 1) throw ConfigError(hp + ".k", "must be a positive integer");
            }
            if (h.contains("sin")) out.sin_amp = require_number(h.at("sin"), hp + ".sin");
            if (h.contains("cos")) out.cos_amp = require_number(h.at("cos"), hp + ".cos");
            harmonics.push_back(out);
        }
    }
    return PeriodicCoefficient(omega, mean, std::move(harmonics), name);
}

}  // namespace

ScenarioConfig preset(const std::string& name) {
    bool boundary_attracting = false;
    if (name == "fig2") {
        boundary_attracting = true;
    } else if (name != "fig1") {
        throw ConfigError("preset", "unknown preset '" + name + "' (expected fig1 or fig2)");
    }
    ScenarioConfig config{preset_coefficients(boundary_attracting)};
    config.initial = State{0.5, 0.7, 1.0};
    config.horizon = 100.0;
    return config;
}

ScenarioConfig scenario_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("<root>", "expected an object");
    if (!j.contains("coefficients")) throw ConfigError("coefficients", "missing");
    const auto& cj = j.at("coefficients");
    if (!cj.is_object()) throw ConfigError("coefficients", "expected an object");

    double default_omega = 0.0;
    if (cj.contains("omega")) {
        default_omega = require_number(cj.at("omega"), "coefficients.omega");
    }

    static const char* kNames[14] = {"a1", "a2", "a3", "b11", "b12", "b21", "b22",
                                     "c1", "c2", "d1", "d2", "alpha", "beta", "gamma"};
    std::vector<PeriodicCoefficient> parsed;
    parsed.reserve(14);
    for (const char* name : kNames) {
        const std::string path = std::string("coefficients.") + name;
        if (!cj.contains(name)) throw ConfigError(path, "missing");
        parsed.push_back(coefficient_from_json(cj.at(name), path, name, default_omega));
        if (!check_positive(parsed.back()).positive) {
            throw ConfigError(path, "coefficient must be strictly positive over one period");
        }
        if (parsed.back().omega() != parsed.front().omega()) {
            throw ConfigError(path + ".omega", "all coefficients must share one period");
        }
    }

    ScenarioConfig config{CoefficientSet(parsed[0], parsed[1], parsed[2], parsed[3], parsed[4],
                                         parsed[5], parsed[6], parsed[7], parsed[8], parsed[9],
                                         parsed[10], parsed[11], parsed[12], parsed[13])};

    if (j.contains("initial")) {
        const auto& ij = j.at("initial");
        if (!ij.is_object()) throw ConfigError("initial", "expected an object");
        const char* comps[3] = {"x1", "x2", "x3"};
        double* dest[3] = {&config.initial.x1, &config.initial.x2, &config.initial.x3};
        for (int i = 0; i < 3; ++i) {
            const std::string path = std::string("initial.") + comps[i];
            if (!ij.contains(comps[i])) throw ConfigError(path, "missing");
            *dest[i] = require_number(ij.at(comps[i]), path);
            if (*dest[i] < 0.0) throw ConfigError(path, "initial densities must be nonnegative");
        }
    }

    if (j.contains("horizon")) {
        config.horizon = require_number(j.at("horizon"), "horizon");
        if (!(config.horizon > 0.0)) throw ConfigError("horizon", "must be positive");
    }

    if (j.contains("integrator")) {
        const auto& gj = j.at("integrator");
        if (!gj.is_object()) throw ConfigError("integrator", "expected an object");
        if (gj.contains("rtol")) config.integrator.rtol = require_number(gj.at("rtol"), "integrator.rtol");
        if (gj.contains("atol")) config.integrator.atol = require_number(gj.at("atol"), "integrator.atol");
        if (gj.contains("initial_step")) {
            config.integrator.initial_step = require_number(gj.at("initial_step"), "integrator.initial_step");
        }
        if (gj.contains("max_steps")) {
            if (!gj.at("max_steps").is_number_integer()) {
                throw ConfigError("integrator.max_steps", "expected an integer");
            }
            const auto steps = gj.at("max_steps").get<long long>();
            if (steps < 1) throw ConfigError("integrator.max_steps", "must be at least 1");
            config.integrator.max_steps = static_cast<std::size_t>(steps);
        }
        if (gj.contains("nonneg_snap")) {
            config.integrator.nonneg_snap = require_number(gj.at("nonneg_snap"), "integrator.nonneg_snap");
        }
        try {
            config.integrator.validate();
        } catch (const std::invalid_argument& err) {
            throw ConfigError("integrator", err.what());
        }
    }

    if (j.contains("output")) {
        const auto& oj = j.at("output");
        if (!oj.is_object()) throw ConfigError("output", "expected an object");
        if (oj.contains("samples_per_period")) {
            if (!oj.at("samples_per_period").is_number_integer()) {
                throw ConfigError("output.samples_per_period", "expected an integer");
            }
            config.output.samples_per_period = oj.at("samples_per_period").get<int>();
            if (config.output.samples_per_period < 1) {
                throw ConfigError("output.samples_per_period", "must be at least 1");
            }
        }
    }
    return config;
}

nlohmann::json scenario_to_json(const ScenarioConfig& config) {
    nlohmann::json j;
    const CoefficientSet& p = config.coefficients;
    j["coefficients"] = {{"omega", p.omega()},
                         {"a1", coefficient_to_json(p.a1())},
                         {"a2", coefficient_to_json(p.a2())},
                         {"a3", coefficient_to_json(p.a3())},
                         {"b11", coefficient_to_json(p.b11())},
                         {"b12", coefficient_to_json(p.b12())},
                         {"b21", coefficient_to_json(p.b21())},
                         {"b22", coefficient_to_json(p.b22())},
                         {"c1", coefficient_to_json(p.c1())},
                         {"c2", coefficient_to_json(p.c2())},
                         {"d1", coefficient_to_json(p.d1())},
                         {"d2", coefficient_to_json(p.d2())},
                         {"alpha", coefficient_to_json(p.alpha())},
                         {"beta", coefficient_to_json(p.beta())},
                         {"gamma", coefficient_to_json(p.gamma())}};
    j["initial"] = {{"x1", config.initial.x1}, {"x2", config.initial.x2}, {"x3", config.initial.x3}};
    j["horizon"] = config.horizon;
    j["integrator"] = {{"rtol", config.integrator.rtol},
                       {"atol", config.integrator.atol},
                       {"initial_step", config.integrator.initial_step},
                       {"max_steps", config.integrator.max_steps},
                       {"nonneg_snap", config.integrator.nonneg_snap}};
    j["output"] = {{"samples_per_period", config.output.samples_per_period}};
    return j;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("<file>", "cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& err) {
        throw ConfigError("<file>", std::string("parse error: ") + err.what());
    }
    return scenario_from_json(j);
}

}  // namespace perilotka
