#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "perilotka/dynamics.hpp"
#include "perilotka/integrator.hpp"

namespace perilotka {

/// Which invariant subsystem an orbit lives in.
enum class OrbitMode { full, boundary, logistic1, logistic2 };

std::size_t mode_dimension(OrbitMode mode);
std::string mode_name(OrbitMode mode);
OrbitMode mode_from_name(const std::string& name);

/// The vector field of the chosen subsystem in its active coordinates.
OdeField mode_ode(const CoefficientSet& p, OrbitMode mode);

/// A located periodic solution: anchor state at t = 0, its one-period
/// trajectory, the fixed-point residual of the period map, and the Floquet
/// multipliers of the monodromy matrix (one per active dimension).
struct PeriodicOrbit {
    OrbitMode mode = OrbitMode::full;
    std::size_t dimension = 0;
    double omega = 0.0;
    std::vector<double> anchor;
    Trajectory trajectory;
    double residual = 0.0;
    std::vector<std::complex<double>> multipliers;

    /// Active-coordinate state at any t (periodic extension).
    std::vector<double> state_at(double t) const;

    /// The orbit embedded back into the full three-species state space.
    State full_state_at(double t) const;
};

struct OrbitSolveOptions {
    double tol = 1e-9;
    int max_newton = 50;
    int max_map_iterations = 500;
    IntegratorConfig integrator{1e-10, 1e-12};
};

/// Thrown when the orbit solver fails to converge; carries the best iterate.
class OrbitSolveError : public std::runtime_error {
public:
    OrbitSolveError(const std::string& what, std::vector<double> best, double residual)
        : std::runtime_error(what), best_(std::move(best)), residual_(residual) {}

    const std::vector<double>& best_iterate() const noexcept { return best_; }
    double residual() const noexcept { return residual_; }

private:
    std::vector<double> best_;
    double residual_;
};

/// The period map: the state reached from x0 after flowing one period from
/// t = 0 in the chosen subsystem.
std::vector<double> poincare(const CoefficientSet& p, OrbitMode mode,
                             std::span<const double> x0, const IntegratorConfig& cfg = {});

/// Convenience overload for the full system.
State poincare(const CoefficientSet& p, const State& x0, const IntegratorConfig& cfg = {});

/// Locates a periodic orbit as a fixed point of the period map: damped
/// Newton with a forward-difference Jacobian, falling back to direct map
/// iteration when Newton stalls. The guess must be strictly positive in the
/// mode's active coordinates and exactly zero in the others.
PeriodicOrbit find_orbit(const CoefficientSet& p, const State& guess, OrbitMode mode,
                         const OrbitSolveOptions& opts = {});

/// Default starting guess: the guess state integrated forward a number of
/// periods in the mode's subsystem (settles onto an attractor when one
/// exists).
State default_guess(const CoefficientSet& p, OrbitMode mode, const State& initial,
                    int periods = 40, const IntegratorConfig& cfg = {});

struct Monodromy {
    Eigen::MatrixXd matrix;
    std::vector<std::complex<double>> multipliers;
};

/// Monodromy matrix over one period: integrates the variational equations
/// along the orbit using the analytic Jacobian of the field. Requires orbit
/// residual below 1e-6.
Monodromy monodromy(const CoefficientSet& p, const PeriodicOrbit& orbit,
                    const IntegratorConfig& cfg = IntegratorConfig{1e-10, 1e-12});

/// Variational transport of the full three-species system along a boundary
/// orbit embedded at x3 = 0 (3x3, out-of-plane stability included).
Monodromy embedded_monodromy(const CoefficientSet& p, const PeriodicOrbit& boundary_orbit,
                             const IntegratorConfig& cfg = IntegratorConfig{1e-10, 1e-12});

/// Integral of the Jacobian trace along the orbit; by the Liouville
/// identity det(monodromy) = exp of this value.
double liouville_exponent(const CoefficientSet& p, const PeriodicOrbit& orbit,
                          double quad_tol = 1e-10);

/// The unique positive periodic solution of X' = X (a(t) - b(t) X),
/// evaluated through its closed form (outer integral by adaptive
/// quadrature, inner one exactly) on a uniform grid. Requires mean(a) > 0.
SampledPeriodicFunction logistic_closed_form(const PeriodicCoefficient& a,
                                             const PeriodicCoefficient& b,
                                             std::size_t grid = 2048, double quad_tol = 1e-11);

}  // namespace perilotka
