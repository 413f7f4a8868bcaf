#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "perilotka/analysis.hpp"
#include "perilotka/integrator.hpp"
#include "perilotka/orbits.hpp"

namespace perilotka {

/// Full-precision decimal rendering (17 significant digits) used by every
/// CSV emitter, so identical runs produce byte-identical files.
std::string format_full(double v);

/// Uniform samples of a trajectory: header t,x1,...,x{dim}, one row per
/// sample at spacing dt, LF line endings.
void write_trajectory_csv(const std::string& path, const Trajectory& traj, double dt);

/// Lyapunov monitor series: header t,V,delta,bound.
void write_lyapunov_csv(const std::string& path, const AttractionReport& report);

struct ChartSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

/// Minimal standalone SVG line chart (linear axes, tick labels, legend).
std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::vector<ChartSeries>& series, int width = 900,
                           int height = 480);

void write_text_file(const std::string& path, const std::string& content);

/// What a CLI command did: the echoed config, every file it produced, and
/// its key scalar results.
struct RunRecord {
    std::string command;
    nlohmann::json config_echo;
    std::vector<std::string> outputs;
    std::map<std::string, double> scalars;
    nlohmann::json reports = nlohmann::json::object();
    double wall_time_s = 0.0;

    nlohmann::json to_json() const;
};

nlohmann::json to_json(const ConditionReport& report);
nlohmann::json to_json(const StabilityReport& report);
nlohmann::json to_json(const ExistenceBounds& bounds);
nlohmann::json orbit_to_json(const PeriodicOrbit& orbit);

std::string to_text(const ConditionReport& report);
std::string to_text(const StabilityReport& report);
std::string orbit_to_text(const PeriodicOrbit& orbit);

}  // namespace perilotka
