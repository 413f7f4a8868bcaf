#include "perilotka/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace perilotka {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

ExtendedReal ext_ln(double x) { return x > 0.0 ? std::log(x) : kNegInf; }

bool ConditionReport::all_hold() const {
    return std::all_of(entries.begin(), entries.end(),
                       [](const ConditionEntry& e) { return e.holds; });
}

const ConditionEntry& ConditionReport::entry(const std::string& name) const {
    for (const ConditionEntry& e : entries) {
        if (e.name == name) return e;
    }
    throw std::out_of_range("ConditionReport: no entry named " + name);
}

ExistenceBounds existence_bounds(const CoefficientSet& p) {
    const double omega = p.omega();
    const double a1 = hat_mean(p.a1());
    const double a2 = hat_mean(p.a2());
    const double a3 = hat_mean(p.a3());
    const double b11 = hat_mean(p.b11());
    const double b12 = hat_mean(p.b12());
    const double b21 = hat_mean(p.b21());
    const double b22 = hat_mean(p.b22());
    const double d1 = hat_mean(p.d1());
    const double d2 = hat_mean(p.d2());
    const double c1_over_gamma = hat_mean(CoefficientExpr(p.c1()) / CoefficientExpr(p.gamma()));
    const double c2_over_gamma = hat_mean(CoefficientExpr(p.c2()) / CoefficientExpr(p.gamma()));
    const Extremes alpha = sup_inf(p.alpha());
    const Extremes beta = sup_inf(p.beta());
    const Extremes gamma = sup_inf(p.gamma());

    ExistenceBounds b;
    b.prey1.min_cap = ext_ln(a1 / b11);
    b.prey1.sup_bound = b.prey1.min_cap + 2.0 * a1 * omega;
    b.prey2.min_cap = ext_ln(a2 / b22);
    b.prey2.sup_bound = b.prey2.min_cap + 2.0 * a2 * omega;

    b.prey1.max_floor = ext_ln((a1 - b12 * std::exp(b.prey2.sup_bound) - c1_over_gamma) / b11);
    b.prey1.inf_bound = b.prey1.max_floor - 2.0 * a1 * omega;
    b.prey2.max_floor = ext_ln((a2 - b21 * std::exp(b.prey1.sup_bound) - c2_over_gamma) / b22);
    b.prey2.inf_bound = b.prey2.max_floor - 2.0 * a2 * omega;

    b.predator.min_cap = ext_ln(
        (d1 * std::exp(b.prey1.sup_bound) + d2 * std::exp(b.prey2.sup_bound) - a3 * alpha.inf) /
        (a3 * gamma.inf));
    b.predator.sup_bound = b.predator.min_cap + 2.0 * a3 * omega;
    b.predator.max_floor = ext_ln((d1 - a3 * beta.sup) * std::exp(b.prey1.inf_bound) +
                                  (d2 - a3 * beta.sup) * std::exp(b.prey2.inf_bound) -
                                  2.0 * a3 * alpha.sup) -
                           std::log(2.0 * a3 * gamma.sup);
    b.predator.inf_bound = b.predator.max_floor - 2.0 * a3 * omega;
    return b;
}

ConditionReport existence_conditions(const CoefficientSet& p) {
    const ExistenceBounds bounds = existence_bounds(p);
    const double a1 = hat_mean(p.a1());
    const double a2 = hat_mean(p.a2());
    const double a3 = hat_mean(p.a3());
    const double b11 = hat_mean(p.b11());
    const double b12 = hat_mean(p.b12());
    const double b21 = hat_mean(p.b21());
    const double b22 = hat_mean(p.b22());
    const double d1 = hat_mean(p.d1());
    const double d2 = hat_mean(p.d2());
    const double c1_over_gamma = hat_mean(CoefficientExpr(p.c1()) / CoefficientExpr(p.gamma()));
    const double c2_over_gamma = hat_mean(CoefficientExpr(p.c2()) / CoefficientExpr(p.gamma()));
    const Extremes alpha = sup_inf(p.alpha());
    const Extremes beta = sup_inf(p.beta());

    ConditionReport report;
    report.title = "positive periodic coexistence: existence conditions";

    auto add = [&report](std::string name, double left, double right) {
        ConditionEntry e;
        e.name = std::move(name);
        e.left = left;
        e.right = right;
        e.margin = left - right;
        e.holds = e.margin > 0.0;
        report.entries.push_back(std::move(e));
    };

    add("competition_determinant", std::abs(b11 * b22 - b12 * b21), 1e-12);
    add("prey1_net_growth", a1, b12 * std::exp(bounds.prey2.sup_bound) + c1_over_gamma);
    add("prey2_net_growth", a2, b21 * std::exp(bounds.prey1.sup_bound) + c2_over_gamma);
    add("predator_support_at_caps",
        d1 * std::exp(bounds.prey1.sup_bound) + d2 * std::exp(bounds.prey2.sup_bound),
        a3 * alpha.inf);
    add("predator_support_at_floors",
        (d1 - a3 * beta.sup) * std::exp(bounds.prey1.inf_bound) +
            (d2 - a3 * beta.sup) * std::exp(bounds.prey2.inf_bound),
        2.0 * a3 * alpha.sup);
    return report;
}

ConditionReport boundary_coexistence_conditions(const CoefficientSet& p) {
    const double a1 = hat_mean(p.a1());
    const double a2 = hat_mean(p.a2());
    if (!(a1 > 0.0)) {
        throw std::invalid_argument(
            "boundary_coexistence_conditions: prey 1 has nonpositive mean growth");
    }
    if (!(a2 > 0.0)) {
        throw std::invalid_argument(
            "boundary_coexistence_conditions: prey 2 has nonpositive mean growth");
    }
    const SampledPeriodicFunction x1_solo = logistic_closed_form(p.a1(), p.b11(), 512);
    const SampledPeriodicFunction x2_solo = logistic_closed_form(p.a2(), p.b22(), 512);

    ConditionReport report;
    report.title = "predator-free prey coexistence conditions";

    auto add = [&report](std::string name, double left, double right) {
        ConditionEntry e;
        e.name = std::move(name);
        e.left = left;
        e.right = right;
        e.margin = left - right;
        e.holds = e.margin > 0.0;
        report.entries.push_back(std::move(e));
    };

    add("prey1_growth_vs_competition", a1,
        hat_mean(CoefficientExpr(p.b12()) * CoefficientExpr(x2_solo)));
    add("prey2_growth_vs_competition", a2,
        hat_mean(CoefficientExpr(p.b21()) * CoefficientExpr(x1_solo)));
    return report;
}

namespace {

// Pointwise worst-pair interaction excess along the prey pair orbit:
// with a_ij(t) = b_ij(t) xbar_j(t), the larger over both orderings of
// (a_ij + a_ji)^2 / (4 a_ii) - a_jj.
double interaction_excess_at(const CoefficientSet& p, const PeriodicOrbit& orbit, double t) {
    const std::vector<double> xbar = orbit.state_at(t);
    const double a11 = p.b11()(t) * xbar[0];
    const double a22 = p.b22()(t) * xbar[1];
    const double a12 = p.b12()(t) * xbar[1];
    const double a21 = p.b21()(t) * xbar[0];
    const double cross = a12 + a21;
    const double first = cross * cross / (4.0 * a11) - a22;
    const double second = cross * cross / (4.0 * a22) - a11;
    return std::max(first, second);
}

SampledPeriodicFunction sample_interaction_excess(const CoefficientSet& p,
                                                  const PeriodicOrbit& orbit) {
    return SampledPeriodicFunction::from_function(
        orbit.omega, 256, [&](double t) { return interaction_excess_at(p, orbit, t); },
        "interaction_excess");
}

PeriodicOrbit solve_boundary_orbit(const CoefficientSet& p) {
    const SampledPeriodicFunction x1_solo = logistic_closed_form(p.a1(), p.b11(), 256);
    const SampledPeriodicFunction x2_solo = logistic_closed_form(p.a2(), p.b22(), 256);
    const State guess{x1_solo(0.0), x2_solo(0.0), 0.0};
    return find_orbit(p, guess, OrbitMode::boundary);
}

}  // namespace

BoundaryStability boundary_stability_condition(const CoefficientSet& p,
                                               const PeriodicOrbit& boundary_orbit) {
    if (boundary_orbit.mode != OrbitMode::boundary) {
        throw std::invalid_argument("boundary_stability_condition: expects a boundary orbit");
    }
    const double omega = boundary_orbit.omega;
    const double mean = integrate_adaptive(
                            [&](double t) { return interaction_excess_at(p, boundary_orbit, t); },
                            0.0, omega, 1e-10) /
                        omega;

    BoundaryStability result{.report = {},
                             .interaction_excess = sample_interaction_excess(p, boundary_orbit),
                             .interaction_excess_mean = mean,
                             .orbit = boundary_orbit};
    result.report.title = "predator-free orbit stability condition";
    ConditionEntry e;
    e.name = "interaction_excess_mean_negative";
    e.left = mean;
    e.right = 0.0;
    e.margin = -mean;
    e.holds = e.margin > 0.0;
    result.report.entries.push_back(std::move(e));
    return result;
}

BoundaryStability boundary_stability_condition(const CoefficientSet& p) {
    return boundary_stability_condition(p, solve_boundary_orbit(p));
}

namespace {

StabilityReport attraction_conditions_core(const CoefficientSet& p) {
    using CE = CoefficientExpr;
    const CE beta_a3 = CE(p.beta()) * CE(p.a3());
    const CE consumption = CE(p.c1()) + CE(p.c2()) + CE(p.d1()) + CE(p.d2());
    const CE conversion = CE(p.d1()) + CE(p.d2());

    StabilityReport r;
    r.margin_b12 = sup_inf(CE(p.b22()) - CE(p.b12())).inf;
    r.margin_b21 = sup_inf(CE(p.b11()) - CE(p.b21())).inf;
    r.margin_pressure = sup_inf(beta_a3 - consumption).inf;
    r.margin_conversion = sup_inf(beta_a3 - conversion).inf;
    r.min_beta_a3 = sup_inf(beta_a3).inf;
    r.max_consumption = sup_inf(consumption).sup;
    r.max_conversion = sup_inf(conversion).sup;

    const double worst_pressure = sup_inf((consumption - beta_a3) / CE(p.beta())).sup;
    const double worst_b = std::max(-r.margin_b12, -r.margin_b21);
    r.decay_margin = -std::max(worst_pressure, worst_b);

    r.holds_global = r.margin_b12 > 0.0 && r.margin_b21 > 0.0 && r.margin_pressure > 0.0;
    r.holds_same_sign = r.margin_pressure > 0.0;
    r.holds_dominating = r.margin_conversion > 0.0;
    return r;
}

}  // namespace

StabilityReport attraction_conditions(const CoefficientSet& p) {
    return attraction_conditions_core(p);
}

StabilityReport attraction_conditions(const CoefficientSet& p,
                                      const PeriodicOrbit& boundary_orbit) {
    StabilityReport r = attraction_conditions_core(p);
    r.interaction_excess = sample_interaction_excess(p, boundary_orbit);
    r.interaction_excess_mean =
        integrate_adaptive([&](double t) { return interaction_excess_at(p, boundary_orbit, t); },
                           0.0, boundary_orbit.omega, 1e-10) /
        boundary_orbit.omega;
    return r;
}

double lyapunov_value(const State& x, double xbar1, double xbar2) {
    if (!(x.x1 > 0.0) || !(x.x2 > 0.0) || !(xbar1 > 0.0) || !(xbar2 > 0.0)) {
        throw std::domain_error("lyapunov_value: prey components must be strictly positive");
    }
    if (x.x3 < 0.0) {
        throw std::domain_error("lyapunov_value: predator component must be nonnegative");
    }
    return std::abs(std::log(x.x1) - std::log(xbar1)) +
           std::abs(std::log(x.x2) - std::log(xbar2)) + x.x3;
}

double lyapunov_decrement_bound(const CoefficientSet& p, double t, const State& x, double xbar1,
                                double xbar2) {
    const double beta = p.beta()(t);
    return (p.b12()(t) - p.b22()(t)) * std::abs(x.x2 - xbar2) +
           (p.b21()(t) - p.b11()(t)) * std::abs(x.x1 - xbar1) +
           (p.c1()(t) + p.c2()(t) + p.d1()(t) + p.d2()(t) - beta * p.a3()(t)) * x.x3 / beta;
}

AttractionReport verify_attraction(const Trajectory& traj, const PeriodicOrbit& boundary_orbit,
                                   const CoefficientSet& p, std::size_t samples_per_period,
                                   double drift_tol, double fd_tol) {
    if (boundary_orbit.mode != OrbitMode::boundary) {
        throw std::invalid_argument("verify_attraction: expects a boundary orbit");
    }
    if (traj.dimension() != 3) {
        throw std::invalid_argument("verify_attraction: expects a full-system trajectory");
    }
    if (samples_per_period < 10) {
        throw std::invalid_argument("verify_attraction: at least 10 samples per period required");
    }
    {
        const auto start = traj.state_at(0);
        if (!(start[0] > 0.0) || !(start[1] > 0.0) || start[2] < 0.0) {
            throw std::invalid_argument(
                "verify_attraction: trajectory must start at positive prey densities");
        }
    }

    const double omega = boundary_orbit.omega;
    const double dt = omega / static_cast<double>(samples_per_period);
    const double t0 = traj.t_begin();
    const double t1 = traj.t_end();

    auto v_at = [&](double t) {
        const std::vector<double> x = traj.sample(t);
        const std::vector<double> xbar = boundary_orbit.state_at(t);
        return lyapunov_value(State{x[0], x[1], x[2]}, xbar[0], xbar[1]);
    };

    AttractionReport report;
    for (double t = t0; t < t1 + 0.5 * dt; t += dt) {
        if (t > t1) t = t1;
        const std::vector<double> x = traj.sample(t);
        const std::vector<double> xbar = boundary_orbit.state_at(t);
        report.times.push_back(t);
        report.v.push_back(lyapunov_value(State{x[0], x[1], x[2]}, xbar[0], xbar[1]));
        report.delta.push_back(std::abs(x[0] - xbar[0]) + std::abs(x[1] - xbar[1]) +
                               std::abs(x[2]));
        report.bound.push_back(
            lyapunov_decrement_bound(p, t, State{x[0], x[1], x[2]}, xbar[0], xbar[1]));
        if (t == t1) break;
    }

    for (std::size_t k = 1; k < report.v.size(); ++k) {
        const double up = report.v[k] - report.v[k - 1];
        if (up > 0.0) {
            report.upward_drift += up;
            report.max_upward_increment = std::max(report.max_upward_increment, up);
        }
    }
    report.v_nonincreasing = report.upward_drift <= drift_tol;
    report.terminal_delta = report.delta.back();

    // Finite-difference decrement check away from the kinks of |.|
    const double fd_h = std::min(dt / 4.0, 2e-4);
    report.max_fd_violation = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < report.times.size(); ++k) {
        const double t = report.times[k];
        if (t - fd_h < t0 || t + fd_h > t1) continue;
        const std::vector<double> x = traj.sample(t);
        const std::vector<double> xbar = boundary_orbit.state_at(t);
        if (std::abs(x[0] - xbar[0]) <= 1e-9 || std::abs(x[1] - xbar[1]) <= 1e-9) continue;
        const double dvdt = (v_at(t + fd_h) - v_at(t - fd_h)) / (2.0 * fd_h);
        report.max_fd_violation = std::max(report.max_fd_violation, dvdt - report.bound[k]);
        ++report.fd_points_checked;
    }
    if (report.fd_points_checked == 0) report.max_fd_violation = 0.0;
    report.fd_check_passed = report.max_fd_violation <= fd_tol;
    return report;
}

namespace {

std::array<double, 3> balance_residuals_core(const CoefficientSet& p,
                                             const std::function<State(double)>& at, double t0,
                                             double quad_tol) {
    const double omega = p.omega();
    auto loss1 = [&](double t) {
        const State x = at(t);
        return p.b11()(t) * x.x1 + p.b12()(t) * x.x2 +
               p.c1()(t) * x.x3 / (p.alpha()(t) + p.beta()(t) * x.x1 + p.gamma()(t) * x.x3);
    };
    auto loss2 = [&](double t) {
        const State x = at(t);
        return p.b21()(t) * x.x1 + p.b22()(t) * x.x2 +
               p.c2()(t) * x.x3 / (p.alpha()(t) + p.beta()(t) * x.x2 + p.gamma()(t) * x.x3);
    };
    auto gain3 = [&](double t) {
        const State x = at(t);
        const double den1 = p.alpha()(t) + p.beta()(t) * x.x1 + p.gamma()(t) * x.x3;
        const double den2 = p.alpha()(t) + p.beta()(t) * x.x2 + p.gamma()(t) * x.x3;
        return p.d1()(t) * x.x1 / den1 + p.d2()(t) * x.x2 / den2;
    };
    return {std::abs(hat_mean(p.a1()) * omega -
                     integrate_adaptive(loss1, t0, t0 + omega, quad_tol)),
            std::abs(hat_mean(p.a2()) * omega -
                     integrate_adaptive(loss2, t0, t0 + omega, quad_tol)),
            std::abs(hat_mean(p.a3()) * omega -
                     integrate_adaptive(gain3, t0, t0 + omega, quad_tol))};
}

}  // namespace

std::array<double, 3> periodic_balance_residuals(const CoefficientSet& p,
                                                 const PeriodicOrbit& full_orbit,
                                                 double quad_tol) {
    if (full_orbit.mode != OrbitMode::full) {
        throw std::invalid_argument("periodic_balance_residuals: expects a full-system orbit");
    }
    return balance_residuals_core(
        p, [&](double t) { return full_orbit.full_state_at(t); }, 0.0, quad_tol);
}

std::array<double, 3> periodic_balance_residuals(const CoefficientSet& p, const Trajectory& traj,
                                                 double t0, double quad_tol) {
    if (traj.dimension() != 3) {
        throw std::invalid_argument("periodic_balance_residuals: expects a 3-state trajectory");
    }
    if (t0 < traj.t_begin() || t0 + p.omega() > traj.t_end()) {
        throw std::out_of_range("periodic_balance_residuals: window outside the trajectory");
    }
    return balance_residuals_core(
        p,
        [&](double t) {
            const std::vector<double> x = traj.sample(t);
            return State{x[0], x[1], x[2]};
        },
        t0, quad_tol);
}

}  // namespace perilotka
