#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "perilotka/dynamics.hpp"
#include "perilotka/integrator.hpp"

namespace perilotka {

/// Configuration problem tied to a specific field; what the CLI reports on
/// malformed or inconsistent input.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& field, const std::string& what)
        : std::runtime_error(field + ": " + what), field_(field) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

struct OutputConfig {
    int samples_per_period = 64;
};

/// A complete experiment description: model coefficients, initial state,
/// horizon, integrator tolerances, and output resolution.
struct ScenarioConfig {
    CoefficientSet coefficients;
    State initial{};
    double horizon = 100.0;
    IntegratorConfig integrator{};
    OutputConfig output{};
};

/// The two built-in experiments: `fig1` converges to a positive periodic
/// solution, `fig2` (stronger predator mortality and saturation) to the
/// predator-free boundary orbit. Both start from (0.5, 0.7, 1.0) with a
/// 100-unit horizon.
ScenarioConfig preset(const std::string& name);

ScenarioConfig scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const ScenarioConfig& config);

/// Loads and validates a config file; throws ConfigError naming the field
/// on any problem.
ScenarioConfig load_scenario(const std::string& path);

}  // namespace perilotka
