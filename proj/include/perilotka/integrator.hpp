#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace perilotka {

/// Right-hand side of an ODE system: writes dy/dt into dydt.
using OdeField = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

struct IntegratorConfig {
    double rtol = 1e-9;
    double atol = 1e-11;
    double initial_step = 0.0;   ///< 0 selects the step automatically
    std::size_t max_steps = 1000000;
    /// Components landing in (-nonneg_snap, 0) after an accepted step are
    /// snapped to exactly 0 (the coordinate planes of the population fields
    /// are invariant, so such excursions are roundoff). 0 disables snapping.
    double nonneg_snap = 1e-13;

    void validate() const;
};

struct IntegrationStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t field_evals = 0;
    double rtol = 0.0;
    double atol = 0.0;
};

/// Dense-output numerical solution: step endpoints, states at the endpoints,
/// and per-step interpolation coefficients. Immutable after construction.
class Trajectory {
public:
    std::size_t dimension() const noexcept { return dim_; }
    std::size_t steps() const noexcept { return times_.empty() ? 0 : times_.size() - 1; }
    double t_begin() const noexcept { return times_.front(); }
    double t_end() const noexcept { return times_.back(); }
    double time_at(std::size_t i) const { return times_.at(i); }
    std::span<const double> state_at(std::size_t i) const;
    const IntegrationStats& stats() const noexcept { return stats_; }

    /// Dense-output interpolation. Throws std::out_of_range outside the span.
    std::vector<double> sample(double t) const;
    void sample_into(double t, std::span<double> out) const;

    /// Evaluates the interpolation polynomial of one particular step, even
    /// marginally outside its interval (used to verify cross-step continuity).
    std::vector<double> sample_on_step(std::size_t step, double t) const;

private:
    friend Trajectory integrate(const OdeField&, double, std::span<const double>, double,
                                const IntegratorConfig&);

    std::size_t dim_ = 0;
    double snap_ = 0.0;
    std::vector<double> times_;
    std::vector<double> states_;        // (steps+1) x dim, row-major
    std::vector<double> dense_;         // steps x (5*dim) interpolation coefficients
    IntegrationStats stats_;

    void eval_dense(std::size_t step, double t, std::span<double> out) const;
    std::size_t locate_step(double t) const;
};

/// Thrown on step-size underflow or when max_steps is exhausted. Carries the
/// partial trajectory accumulated so far.
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, Trajectory partial)
        : std::runtime_error(what), partial_(std::move(partial)) {}

    const Trajectory& partial() const noexcept { return partial_; }

private:
    Trajectory partial_;
};

/// Adaptive Dormand-Prince 5(4) integration over [t0, t_end] with free
/// 4th-order dense output.
Trajectory integrate(const OdeField& f, double t0, std::span<const double> y0, double t_end,
                     const IntegratorConfig& cfg = {});

/// Endpoint of integrate over [t0, t0 + duration]; duration 0 returns y0.
std::vector<double> flow(const OdeField& f, double t0, std::span<const double> y0,
                         double duration, const IntegratorConfig& cfg = {});

/// One embedded 5(4) step from (t, y) with fixed step h: returns the
/// 5th-order result. If embedded_err is non-null it receives the difference
/// between the 5th- and 4th-order results (the local error estimate).
/// No step-size control and no snapping; exposed for convergence studies.
std::vector<double> rk45_step(const OdeField& f, double t, std::span<const double> y, double h,
                              std::vector<double>* embedded_err = nullptr);

}  // namespace perilotka
