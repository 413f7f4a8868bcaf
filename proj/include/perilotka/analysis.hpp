#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "perilotka/coefficients.hpp"
#include "perilotka/dynamics.hpp"
#include "perilotka/orbits.hpp"

namespace perilotka {

/// Real line extended by -infinity, which absorbs addition with finite
/// values and arises as the logarithm of a nonpositive argument.
using ExtendedReal = double;

/// ln for the extended convention: -infinity when x <= 0.
ExtendedReal ext_ln(double x);

/// A-priori bounds on one log-population over a period, derived from the
/// period-averaged balance: an upper cap on its minimum, a global upper
/// bound, a lower floor on its maximum, and a global lower bound.
struct SpeciesLogBounds {
    ExtendedReal min_cap = 0.0;    ///< upper bound for the minimum of u_i
    ExtendedReal sup_bound = 0.0;  ///< min_cap + 2 * mean(a_i) * omega
    ExtendedReal max_floor = 0.0;  ///< lower bound for the maximum of u_i
    ExtendedReal inf_bound = 0.0;  ///< max_floor - 2 * mean(a_i) * omega
};

struct ExistenceBounds {
    SpeciesLogBounds prey1;
    SpeciesLogBounds prey2;
    SpeciesLogBounds predator;
};

/// Computes the full bound ladder. A nonpositive logarithm argument yields
/// -infinity, which then propagates through the dependent bounds.
ExistenceBounds existence_bounds(const CoefficientSet& p);

/// One named inequality with its two sides; the margin is oriented so that
/// margin > 0 means the condition is satisfied.
struct ConditionEntry {
    std::string name;
    double left = 0.0;
    double right = 0.0;
    double margin = 0.0;
    bool holds = false;
};

struct ConditionReport {
    std::string title;
    std::vector<ConditionEntry> entries;

    bool all_hold() const;
    const ConditionEntry& entry(const std::string& name) const;
};

/// The five inequalities that together guarantee a positive periodic
/// solution of the full system.
ConditionReport existence_conditions(const CoefficientSet& p);

/// Mean-growth-versus-competition conditions under which the predator-free
/// plane carries a positive periodic prey pair. Requires positive mean
/// growth rates.
ConditionReport boundary_coexistence_conditions(const CoefficientSet& p);

/// Stability criterion for the predator-free periodic prey pair: the period
/// average of the worst-pair interaction excess must be negative.
struct BoundaryStability {
    ConditionReport report;
    SampledPeriodicFunction interaction_excess;  ///< pointwise worst-pair excess
    double interaction_excess_mean = 0.0;
    PeriodicOrbit orbit;  ///< the prey pair the criterion was evaluated on
};

BoundaryStability boundary_stability_condition(const CoefficientSet& p,
                                               const PeriodicOrbit& boundary_orbit);
BoundaryStability boundary_stability_condition(const CoefficientSet& p);

/// Pointwise sufficient conditions for the predator-free orbit to attract:
/// all margins are minima over one period.
struct StabilityReport {
    bool holds_global = false;      ///< cross-competition dominated and full pressure margin
    bool holds_same_sign = false;   ///< pressure margin alone (sign-linked deviations)
    bool holds_dominating = false;  ///< conversion margin alone (dominating solutions)

    double margin_b12 = 0.0;        ///< min_t (b22 - b12)
    double margin_b21 = 0.0;        ///< min_t (b11 - b21)
    double margin_pressure = 0.0;   ///< min_t (beta a3 - (c1+c2+d1+d2))
    double margin_conversion = 0.0; ///< min_t (beta a3 - (d1+d2))

    double min_beta_a3 = 0.0;
    double max_consumption = 0.0;   ///< max_t (c1+c2+d1+d2)
    double max_conversion = 0.0;    ///< max_t (d1+d2)

    /// Decay rate in the Lyapunov decrement estimate:
    /// -max_t max{(c1+c2+d1+d2-beta a3)/beta, b12-b22, b21-b11}.
    double decay_margin = 0.0;

    std::optional<SampledPeriodicFunction> interaction_excess;
    std::optional<double> interaction_excess_mean;
};

StabilityReport attraction_conditions(const CoefficientSet& p);
StabilityReport attraction_conditions(const CoefficientSet& p,
                                      const PeriodicOrbit& boundary_orbit);

/// Distance-to-orbit functional V = |ln x1 - ln xbar1| + |ln x2 - ln xbar2|
/// + x3. Throws std::domain_error for nonpositive prey components.
double lyapunov_value(const State& x, double xbar1, double xbar2);

/// Upper bound for the right derivative of V along solutions:
/// sum over prey pairs of (b_ij - b_jj)|x_j - xbar_j| plus
/// (c1+c2+d1+d2 - beta a3) x3 / beta.
double lyapunov_decrement_bound(const CoefficientSet& p, double t, const State& x, double xbar1,
                                double xbar2);

/// Samples V, the deviation Delta = sum_i |x_i - xbar_i|, and the decrement
/// bound along a trajectory against a boundary orbit, and verifies the
/// finite-difference derivative of V against the bound away from the
/// nonsmooth locus of the absolute values.
struct AttractionReport {
    std::vector<double> times;
    std::vector<double> v;
    std::vector<double> delta;
    std::vector<double> bound;

    double max_upward_increment = 0.0;
    double upward_drift = 0.0;  ///< cumulative positive V increments
    bool v_nonincreasing = false;
    double terminal_delta = 0.0;

    std::size_t fd_points_checked = 0;
    double max_fd_violation = 0.0;  ///< max of dV/dt - bound over admissible points
    bool fd_check_passed = false;
};

AttractionReport verify_attraction(const Trajectory& traj, const PeriodicOrbit& boundary_orbit,
                                   const CoefficientSet& p, std::size_t samples_per_period = 64,
                                   double drift_tol = 1e-6, double fd_tol = 1e-6);

/// Residuals of the three period-averaged balance identities that any
/// periodic solution of the full system satisfies: mean growth times the
/// period equals the period integral of the matching loss terms.
std::array<double, 3> periodic_balance_residuals(const CoefficientSet& p,
                                                 const PeriodicOrbit& full_orbit,
                                                 double quad_tol = 1e-8);
std::array<double, 3> periodic_balance_residuals(const CoefficientSet& p, const Trajectory& traj,
                                                 double t0, double quad_tol = 1e-8);

}  // namespace perilotka
