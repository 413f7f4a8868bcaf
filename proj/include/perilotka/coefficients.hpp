#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace perilotka {

/// Thrown when adaptive quadrature exhausts its refinement budget before
/// reaching the requested tolerance. Carries the best estimate obtained.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double estimate)
        : std::runtime_error(what), estimate_(estimate) {}

    double estimate() const noexcept { return estimate_; }

private:
    double estimate_;
};

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance.
/// Throws QuadratureError if max_depth bisections cannot resolve the
/// integral to the requested tolerance.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol = 1e-12, int max_depth = 40);

/// One term of a truncated trigonometric series: amplitude of sin and cos
/// at k times the base frequency.
struct Harmonic {
    int k = 1;
    double sin_amp = 0.0;
    double cos_amp = 0.0;
};

/// A periodic model coefficient represented as a truncated trigonometric
/// series: mean + sum_k [ sin_amp * sin(k*W*t) + cos_amp * cos(k*W*t) ]
/// with base frequency W = 2*pi/omega. Immutable after construction.
class PeriodicCoefficient {
public:
    PeriodicCoefficient(double omega, double mean, std::vector<Harmonic> harmonics = {},
                        std::string name = "");

    double omega() const noexcept { return omega_; }
    double mean_term() const noexcept { return mean_; }
    const std::vector<Harmonic>& harmonics() const noexcept { return harmonics_; }
    const std::string& name() const noexcept { return name_; }
    bool is_constant() const noexcept { return harmonics_.empty(); }

    double operator()(double t) const;

    /// Exact antiderivative F(t) with F(0) = 0.
    double antiderivative(double t) const;

    /// Exact integral over [t0, t1].
    double integral(double t0, double t1) const {
        return antiderivative(t1) - antiderivative(t0);
    }

    /// The coefficient t -> f(t + dt), as a trigonometric series again.
    PeriodicCoefficient shifted(double dt) const;

    PeriodicCoefficient renamed(std::string name) const;

private:
    double omega_;
    double mean_;
    std::vector<Harmonic> harmonics_;
    std::string name_;
};

/// A periodic function known only through uniform samples over one period,
/// interpolated by a periodic cubic spline. Used for quantities with no
/// closed trigonometric form (periodic logistic solutions, orbit-dependent
/// integrands).
class SampledPeriodicFunction {
public:
    /// values[i] is the function at t = i*omega/values.size(). At least 16
    /// samples are required.
    SampledPeriodicFunction(double omega, std::vector<double> values, std::string name = "");

    static SampledPeriodicFunction from_function(double omega, std::size_t samples,
                                                 const std::function<double(double)>& f,
                                                 std::string name = "");

    double omega() const noexcept { return omega_; }
    std::size_t size() const noexcept { return values_.size(); }
    const std::vector<double>& values() const noexcept { return values_; }
    const std::string& name() const noexcept { return name_; }

    double operator()(double t) const;

    /// Derivative of the interpolating spline.
    double derivative(double t) const;

    /// Exact period average of the interpolating spline.
    double spline_mean() const;

private:
    double omega_;
    std::vector<double> values_;
    std::vector<double> second_;  // spline second derivatives at the nodes
    std::string name_;

    void build_spline();
    void locate(double t, std::size_t& i, double& theta) const;
};

/// Pointwise arithmetic over periodic functions: an immutable expression
/// tree whose leaves are PeriodicCoefficient or SampledPeriodicFunction.
/// All operands must share one period. Quotient nodes verify on a refined
/// grid that the denominator stays bounded away from zero.
class CoefficientExpr {
public:
    CoefficientExpr(PeriodicCoefficient leaf);        // NOLINT(google-explicit-constructor)
    CoefficientExpr(SampledPeriodicFunction leaf);    // NOLINT(google-explicit-constructor)

    double omega() const noexcept;
    double operator()(double t) const;
    std::string describe() const;

    /// True when the whole expression is a single trigonometric-series leaf
    /// (its period average is then exact).
    const PeriodicCoefficient* trig_leaf() const noexcept;

    friend CoefficientExpr operator+(const CoefficientExpr& a, const CoefficientExpr& b);
    friend CoefficientExpr operator-(const CoefficientExpr& a, const CoefficientExpr& b);
    friend CoefficientExpr operator*(const CoefficientExpr& a, const CoefficientExpr& b);
    friend CoefficientExpr operator/(const CoefficientExpr& a, const CoefficientExpr& b);

private:
    struct Node;
    explicit CoefficientExpr(std::shared_ptr<const Node> root);
    static CoefficientExpr combine(char op, const CoefficientExpr& a, const CoefficientExpr& b);

    std::shared_ptr<const Node> root_;
};

/// Period average (1/omega) * integral over one period. Exact for a pure
/// trigonometric series; adaptive quadrature otherwise.
double hat_mean(const PeriodicCoefficient& f);
double hat_mean(const CoefficientExpr& f, double abs_tol = 1e-12);
double hat_mean(const SampledPeriodicFunction& f);

/// Global extremes over one period, located on a dense grid and sharpened
/// by golden-section refinement.
struct Extremes {
    double sup = 0.0;
    double inf = 0.0;
    double argmax = 0.0;
    double argmin = 0.0;
};

Extremes sup_inf(const PeriodicCoefficient& f, std::size_t grid = 4096, double t_tol = 1e-10);
Extremes sup_inf(const CoefficientExpr& f, std::size_t grid = 4096, double t_tol = 1e-10);

/// Positivity check: true iff inf over one period is strictly positive.
/// On failure the argmin is reported as the violation point.
struct PositivityCheck {
    bool positive = false;
    double min_value = 0.0;
    std::optional<double> violation_t;
};

PositivityCheck check_positive(const PeriodicCoefficient& f);
PositivityCheck check_positive(const CoefficientExpr& f);

}  // namespace perilotka
