#include "perilotka/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace perilotka {

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

void write_lines(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

}  // namespace

void write_text_file(const std::string& path, const std::string& content) {
    write_lines(path, content);
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj, double dt) {
    std::ostringstream out;
    out << "t";
    for (std::size_t i = 1; i <= traj.dimension(); ++i) out << ",x" << i;
    out << "\n";
    const double t0 = traj.t_begin();
    const double t1 = traj.t_end();
    std::vector<double> state(traj.dimension());
    for (double t = t0;; t += dt) {
        if (t > t1) t = t1;
        traj.sample_into(t, state);
        out << format_full(t);
        for (double v : state) out << "," << format_full(v);
        out << "\n";
        if (t >= t1) break;
    }
    write_lines(path, out.str());
}

void write_lyapunov_csv(const std::string& path, const AttractionReport& report) {
    std::ostringstream out;
    out << "t,V,delta,bound\n";
    for (std::size_t i = 0; i < report.times.size(); ++i) {
        out << format_full(report.times[i]) << "," << format_full(report.v[i]) << ","
            << format_full(report.delta[i]) << "," << format_full(report.bound[i]) << "\n";
    }
    write_lines(path, out.str());
}

namespace {

struct AxisTicks {
    double lo = 0.0;
    double hi = 1.0;
    std::vector<double> ticks;
};

AxisTicks nice_axis(double lo, double hi) {
    if (!(hi > lo)) hi = lo + 1.0;
    const double span = hi - lo;
    const double raw = span / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (mag * m >= raw) {
            step = mag * m;
            break;
        }
    }
    AxisTicks axis;
    axis.lo = std::floor(lo / step) * step;
    axis.hi = std::ceil(hi / step) * step;
    for (double v = axis.lo; v <= axis.hi + 0.5 * step; v += step) axis.ticks.push_back(v);
    return axis;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

}  // namespace

std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::vector<ChartSeries>& series, int width, int height) {
    static const char* kColors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd"};
    const double ml = 62, mr = 20, mt = 38, mb = 46;
    const double pw = width - ml - mr;
    const double ph = height - mt - mb;

    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    bool first = true;
    for (const ChartSeries& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (first) {
                xmin = xmax = s.x[i];
                ymin = ymax = s.y[i];
                first = false;
            }
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    }
    const AxisTicks xa = nice_axis(xmin, xmax);
    const AxisTicks ya = nice_axis(ymin, ymax);

    auto sx = [&](double v) { return ml + (v - xa.lo) / (xa.hi - xa.lo) * pw; };
    auto sy = [&](double v) { return mt + ph - (v - ya.lo) / (ya.hi - ya.lo) * ph; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n";

    for (double v : xa.ticks) {
        svg << "<line x1=\"" << sx(v) << "\" y1=\"" << mt << "\" x2=\"" << sx(v) << "\" y2=\""
            << mt + ph << "\" stroke=\"#dddddd\"/>\n";
        svg << "<text x=\"" << sx(v) << "\" y=\"" << mt + ph + 18
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << tick_label(v) << "</text>\n";
    }
    for (double v : ya.ticks) {
        svg << "<line x1=\"" << ml << "\" y1=\"" << sy(v) << "\" x2=\"" << ml + pw << "\" y2=\""
            << sy(v) << "\" stroke=\"#dddddd\"/>\n";
        svg << "<text x=\"" << ml - 8 << "\" y=\"" << sy(v) + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << tick_label(v) << "</text>\n";
    }
    svg << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"#444444\"/>\n";
    svg << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 10
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << x_label
        << "</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const ChartSeries& s = series[si];
        svg << "<polyline fill=\"none\" stroke=\"" << kColors[si % 5]
            << "\" stroke-width=\"1.4\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (i) svg << " ";
            svg << sx(s.x[i]) << "," << sy(s.y[i]);
        }
        svg << "\"/>\n";
        const double lx = ml + pw - 120;
        const double ly = mt + 16 + 18 * static_cast<double>(si);
        svg << "<line x1=\"" << lx << "\" y1=\"" << ly - 4 << "\" x2=\"" << lx + 24 << "\" y2=\""
            << ly - 4 << "\" stroke=\"" << kColors[si % 5] << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << lx + 30 << "\" y=\"" << ly
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.label << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

nlohmann::json RunRecord::to_json() const {
    nlohmann::json j;
    j["command"] = command;
    j["config"] = config_echo;
    j["outputs"] = outputs;
    j["scalars"] = scalars;
    j["reports"] = reports;
    j["wall_time_s"] = wall_time_s;
    return j;
}

nlohmann::json to_json(const ConditionReport& report) {
    nlohmann::json entries = nlohmann::json::array();
    for (const ConditionEntry& e : report.entries) {
        entries.push_back({{"name", e.name},
                           {"left", e.left},
                           {"right", e.right},
                           {"margin", e.margin},
                           {"holds", e.holds}});
    }
    return {{"title", report.title}, {"entries", entries}, {"all_hold", report.all_hold()}};
}

nlohmann::json to_json(const StabilityReport& report) {
    nlohmann::json j{{"holds_global", report.holds_global},
                     {"holds_same_sign", report.holds_same_sign},
                     {"holds_dominating", report.holds_dominating},
                     {"margin_b12", report.margin_b12},
                     {"margin_b21", report.margin_b21},
                     {"margin_pressure", report.margin_pressure},
                     {"margin_conversion", report.margin_conversion},
                     {"min_beta_a3", report.min_beta_a3},
                     {"max_consumption", report.max_consumption},
                     {"max_conversion", report.max_conversion},
                     {"decay_margin", report.decay_margin}};
    if (report.interaction_excess_mean) {
        j["interaction_excess_mean"] = *report.interaction_excess_mean;
    }
    return j;
}

nlohmann::json to_json(const ExistenceBounds& bounds) {
    auto species = [](const SpeciesLogBounds& s) {
        return nlohmann::json{{"min_cap", s.min_cap},
                              {"sup_bound", s.sup_bound},
                              {"max_floor", s.max_floor},
                              {"inf_bound", s.inf_bound}};
    };
    return {{"prey1", species(bounds.prey1)},
            {"prey2", species(bounds.prey2)},
            {"predator", species(bounds.predator)}};
}

nlohmann::json orbit_to_json(const PeriodicOrbit& orbit) {
    nlohmann::json mult = nlohmann::json::array();
    for (const auto& m : orbit.multipliers) {
        mult.push_back({{"re", m.real()}, {"im", m.imag()}, {"abs", std::abs(m)}});
    }
    return {{"mode", mode_name(orbit.mode)},
            {"dimension", orbit.dimension},
            {"omega", orbit.omega},
            {"anchor", orbit.anchor},
            {"residual", orbit.residual},
            {"multipliers", mult}};
}

std::string to_text(const ConditionReport& report) {
    std::ostringstream out;
    out << report.title << "\n";
    for (const ConditionEntry& e : report.entries) {
        out << "  [" << (e.holds ? "ok" : "FAIL") << "] " << e.name << ": left="
            << format_full(e.left) << " right=" << format_full(e.right)
            << " margin=" << format_full(e.margin) << "\n";
    }
    out << "  overall: " << (report.all_hold() ? "satisfied" : "not satisfied") << "\n";
    return out.str();
}

std::string to_text(const StabilityReport& report) {
    std::ostringstream out;
    out << "predator-free orbit attraction conditions\n";
    out << "  [" << (report.holds_global ? "ok" : "FAIL")
        << "] global attraction: cross-competition margins " << format_full(report.margin_b12)
        << ", " << format_full(report.margin_b21) << "; pressure margin "
        << format_full(report.margin_pressure) << "\n";
    out << "  [" << (report.holds_same_sign ? "ok" : "FAIL")
        << "] sign-linked attraction: pressure margin " << format_full(report.margin_pressure)
        << "\n";
    out << "  [" << (report.holds_dominating ? "ok" : "FAIL")
        << "] dominating-solution attraction: conversion margin "
        << format_full(report.margin_conversion) << "\n";
    out << "  min beta*a3 = " << format_full(report.min_beta_a3)
        << ", max c1+c2+d1+d2 = " << format_full(report.max_consumption)
        << ", max d1+d2 = " << format_full(report.max_conversion) << "\n";
    out << "  decay margin = " << format_full(report.decay_margin) << "\n";
    if (report.interaction_excess_mean) {
        out << "  mean interaction excess = " << format_full(*report.interaction_excess_mean)
            << "\n";
    }
    return out.str();
}

std::string orbit_to_text(const PeriodicOrbit& orbit) {
    std::ostringstream out;
    out << "periodic orbit (" << mode_name(orbit.mode) << ", period " << format_full(orbit.omega)
        << ")\n";
    out << "  anchor:";
    for (double v : orbit.anchor) out << " " << format_full(v);
    out << "\n  residual: " << format_full(orbit.residual) << "\n  multipliers:";
    for (const auto& m : orbit.multipliers) {
        out << " (" << format_full(m.real()) << (m.imag() < 0 ? "-" : "+")
            << format_full(std::abs(m.imag())) << "i, |.|=" << format_full(std::abs(m)) << ")";
    }
    out << "\n";
    return out.str();
}

}  // namespace perilotka
