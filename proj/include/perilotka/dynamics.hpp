#pragma once

#include <array>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "perilotka/coefficients.hpp"
#include "perilotka/integrator.hpp"

namespace perilotka {

/// Population densities; exact zeros are admitted (the coordinate planes
/// carry the boundary dynamics).
struct State {
    double x1 = 0.0;
    double x2 = 0.0;
    double x3 = 0.0;
};

/// Log-populations u_i = ln x_i; finite only for strictly positive densities.
struct LogState {
    double u1 = 0.0;
    double u2 = 0.0;
    double u3 = 0.0;
};

/// Controls whether the positivity invariant of the model coefficients is
/// enforced at construction. Degenerate variants (zero competition or
/// predation coefficients) are admitted by `allow_zero` for edge-case
/// analysis; the saturation coefficient alpha must stay positive either way
/// since it alone keeps the response denominators away from zero.
enum class Positivity { require, allow_zero };

/// The 14 periodic coefficient functions of the two-prey/one-predator model,
/// sharing one common period.
class CoefficientSet {
public:
    CoefficientSet(PeriodicCoefficient a1, PeriodicCoefficient a2, PeriodicCoefficient a3,
                   PeriodicCoefficient b11, PeriodicCoefficient b12, PeriodicCoefficient b21,
                   PeriodicCoefficient b22, PeriodicCoefficient c1, PeriodicCoefficient c2,
                   PeriodicCoefficient d1, PeriodicCoefficient d2, PeriodicCoefficient alpha,
                   PeriodicCoefficient beta, PeriodicCoefficient gamma,
                   Positivity positivity = Positivity::require);

    double omega() const noexcept { return a1_.omega(); }

    const PeriodicCoefficient& a1() const noexcept { return a1_; }
    const PeriodicCoefficient& a2() const noexcept { return a2_; }
    const PeriodicCoefficient& a3() const noexcept { return a3_; }
    const PeriodicCoefficient& b11() const noexcept { return b11_; }
    const PeriodicCoefficient& b12() const noexcept { return b12_; }
    const PeriodicCoefficient& b21() const noexcept { return b21_; }
    const PeriodicCoefficient& b22() const noexcept { return b22_; }
    const PeriodicCoefficient& c1() const noexcept { return c1_; }
    const PeriodicCoefficient& c2() const noexcept { return c2_; }
    const PeriodicCoefficient& d1() const noexcept { return d1_; }
    const PeriodicCoefficient& d2() const noexcept { return d2_; }
    const PeriodicCoefficient& alpha() const noexcept { return alpha_; }
    const PeriodicCoefficient& beta() const noexcept { return beta_; }
    const PeriodicCoefficient& gamma() const noexcept { return gamma_; }

    /// Name of the first coefficient whose infimum over one period is not
    /// strictly positive, if any.
    std::optional<std::string> first_nonpositive() const;

    /// Every coefficient shifted in time by dt.
    CoefficientSet shifted(double dt) const;

private:
    PeriodicCoefficient a1_, a2_, a3_, b11_, b12_, b21_, b22_, c1_, c2_, d1_, d2_, alpha_, beta_,
        gamma_;
};

/// Beddington-DeAngelis predation term c(t) prey pred / (alpha(t) +
/// beta(t) prey + gamma(t) pred); zero when either density is zero.
double bd_response(const PeriodicCoefficient& c, const PeriodicCoefficient& alpha,
                   const PeriodicCoefficient& beta, const PeriodicCoefficient& gamma, double t,
                   double prey, double pred);

/// Right-hand side of the full three-species system.
std::array<double, 3> full_field(const CoefficientSet& p, double t, const State& x);

/// Right-hand side in log coordinates; throws std::domain_error when any
/// |u_i| exceeds 700 (exp overflow guard).
std::array<double, 3> log_field(const CoefficientSet& p, double t, const LogState& u);

/// Predator-free competitive subsystem (the plane x3 = 0).
std::array<double, 2> boundary_field(const CoefficientSet& p, double t, double x1, double x2);

/// Scalar logistic rate X' = X (a(t) - b(t) X).
double logistic_field(const PeriodicCoefficient& a, const PeriodicCoefficient& b, double t,
                      double x);

/// Analytic Jacobians of the fields with respect to the state.
Eigen::Matrix3d full_jacobian(const CoefficientSet& p, double t, const State& x);
Eigen::Matrix2d boundary_jacobian(const CoefficientSet& p, double t, double x1, double x2);
double logistic_jacobian(const PeriodicCoefficient& a, const PeriodicCoefficient& b, double t,
                         double x);

/// Adapters packaging the fields for the integrator.
OdeField full_ode(const CoefficientSet& p);
OdeField boundary_ode(const CoefficientSet& p);
OdeField logistic_ode(const PeriodicCoefficient& a, const PeriodicCoefficient& b);
OdeField log_ode(const CoefficientSet& p);

}  // namespace perilotka
