#include "perilotka/dynamics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace perilotka {

CoefficientSet::CoefficientSet(PeriodicCoefficient a1, PeriodicCoefficient a2,
                               PeriodicCoefficient a3, PeriodicCoefficient b11,
                               PeriodicCoefficient b12, PeriodicCoefficient b21,
                               PeriodicCoefficient b22, PeriodicCoefficient c1,
                               PeriodicCoefficient c2, PeriodicCoefficient d1,
                               PeriodicCoefficient d2, PeriodicCoefficient alpha,
                               PeriodicCoefficient beta, PeriodicCoefficient gamma,
                               Positivity positivity)
    : a1_(std::move(a1)), a2_(std::move(a2)), a3_(std::move(a3)), b11_(std::move(b11)),
      b12_(std::move(b12)), b21_(std::move(b21)), b22_(std::move(b22)), c1_(std::move(c1)),
      c2_(std::move(c2)), d1_(std::move(d1)), d2_(std::move(d2)), alpha_(std::move(alpha)),
      beta_(std::move(beta)), gamma_(std::move(gamma)) {
    const PeriodicCoefficient* all[] = {&a1_, &a2_, &a3_,   &b11_, &b12_, &b21_, &b22_,
                                        &c1_, &c2_, &d1_,   &d2_,  &alpha_, &beta_, &gamma_};
    const char* names[] = {"a1", "a2", "a3", "b11", "b12", "b21", "b22",
                           "c1", "c2", "d1", "d2", "alpha", "beta", "gamma"};
    const double omega = a1_.omega();
    for (std::size_t i = 0; i < 14; ++i) {
        if (all[i]->omega() != omega) {
            std::ostringstream msg;
            msg << "CoefficientSet: coefficient " << names[i] << " has period " << all[i]->omega()
                << ", expected the common period " << omega;
            throw std::invalid_argument(msg.str());
        }
    }
    if (positivity == Positivity::require) {
        if (auto offender = first_nonpositive()) {
            throw std::invalid_argument("CoefficientSet: coefficient " + *offender +
                                        " is not strictly positive over one period");
        }
    } else if (!check_positive(alpha_).positive) {
        throw std::invalid_argument(
            "CoefficientSet: alpha must be strictly positive (response denominators)");
    }
}

std::optional<std::string> CoefficientSet::first_nonpositive() const {
    const PeriodicCoefficient* all[] = {&a1_, &a2_, &a3_,   &b11_, &b12_, &b21_, &b22_,
                                        &c1_, &c2_, &d1_,   &d2_,  &alpha_, &beta_, &gamma_};
    const char* names[] = {"a1", "a2", "a3", "b11", "b12", "b21", "b22",
                           "c1", "c2", "d1", "d2", "alpha", "beta", "gamma"};
    for (std::size_t i = 0; i < 14; ++i) {
        if (!check_positive(*all[i]).positive) return std::string(names[i]);
    }
    return std::nullopt;
}

CoefficientSet CoefficientSet::shifted(double dt) const {
    return CoefficientSet(a1_.shifted(dt), a2_.shifted(dt), a3_.shifted(dt), b11_.shifted(dt),
                          b12_.shifted(dt), b21_.shifted(dt), b22_.shifted(dt), c1_.shifted(dt),
                          c2_.shifted(dt), d1_.shifted(dt), d2_.shifted(dt), alpha_.shifted(dt),
                          beta_.shifted(dt), gamma_.shifted(dt), Positivity::allow_zero);
}

double bd_response(const PeriodicCoefficient& c, const PeriodicCoefficient& alpha,
                   const PeriodicCoefficient& beta, const PeriodicCoefficient& gamma, double t,
                   double prey, double pred) {
    if (prey == 0.0 || pred == 0.0) return 0.0;
    return c(t) * prey * pred / (alpha(t) + beta(t) * prey + gamma(t) * pred);
}

std::array<double, 3> full_field(const CoefficientSet& p, double t, const State& x) {
    const double alpha = p.alpha()(t);
    const double beta = p.beta()(t);
    const double gamma = p.gamma()(t);
    const double den1 = alpha + beta * x.x1 + gamma * x.x3;
    const double den2 = alpha + beta * x.x2 + gamma * x.x3;
    const double f1 =
        x.x1 * (p.a1()(t) - p.b11()(t) * x.x1 - p.b12()(t) * x.x2) -
        p.c1()(t) * x.x1 * x.x3 / den1;
    const double f2 =
        x.x2 * (p.a2()(t) - p.b21()(t) * x.x1 - p.b22()(t) * x.x2) -
        p.c2()(t) * x.x2 * x.x3 / den2;
    const double f3 =
        x.x3 * (-p.a3()(t) + p.d1()(t) * x.x1 / den1 + p.d2()(t) * x.x2 / den2);
    return {f1, f2, f3};
}

std::array<double, 3> log_field(const CoefficientSet& p, double t, const LogState& u) {
    if (std::abs(u.u1) > 700.0 || std::abs(u.u2) > 700.0 || std::abs(u.u3) > 700.0) {
        throw std::domain_error("log_field: |u_i| > 700 would overflow exp");
    }
    const double x1 = std::exp(u.u1);
    const double x2 = std::exp(u.u2);
    const double x3 = std::exp(u.u3);
    const double alpha = p.alpha()(t);
    const double beta = p.beta()(t);
    const double gamma = p.gamma()(t);
    const double den1 = alpha + beta * x1 + gamma * x3;
    const double den2 = alpha + beta * x2 + gamma * x3;
    return {p.a1()(t) - p.b11()(t) * x1 - p.b12()(t) * x2 - p.c1()(t) * x3 / den1,
            p.a2()(t) - p.b21()(t) * x1 - p.b22()(t) * x2 - p.c2()(t) * x3 / den2,
            -p.a3()(t) + p.d1()(t) * x1 / den1 + p.d2()(t) * x2 / den2};
}

std::array<double, 2> boundary_field(const CoefficientSet& p, double t, double x1, double x2) {
    return {x1 * (p.a1()(t) - p.b11()(t) * x1 - p.b12()(t) * x2),
            x2 * (p.a2()(t) - p.b21()(t) * x1 - p.b22()(t) * x2)};
}

double logistic_field(const PeriodicCoefficient& a, const PeriodicCoefficient& b, double t,
                      double x) {
    return x * (a(t) - b(t) * x);
}

Eigen::Matrix3d full_jacobian(const CoefficientSet& p, double t, const State& x) {
    const double a1 = p.a1()(t), a2 = p.a2()(t), a3 = p.a3()(t);
    const double b11 = p.b11()(t), b12 = p.b12()(t), b21 = p.b21()(t), b22 = p.b22()(t);
    const double c1 = p.c1()(t), c2 = p.c2()(t), d1 = p.d1()(t), d2 = p.d2()(t);
    const double alpha = p.alpha()(t), beta = p.beta()(t), gamma = p.gamma()(t);
    const double den1 = alpha + beta * x.x1 + gamma * x.x3;
    const double den2 = alpha + beta * x.x2 + gamma * x.x3;
    const double den1sq = den1 * den1;
    const double den2sq = den2 * den2;

    Eigen::Matrix3d j;
    j(0, 0) = a1 - 2.0 * b11 * x.x1 - b12 * x.x2 - c1 * x.x3 * (alpha + gamma * x.x3) / den1sq;
    j(0, 1) = -b12 * x.x1;
    j(0, 2) = -c1 * x.x1 * (alpha + beta * x.x1) / den1sq;
    j(1, 0) = -b21 * x.x2;
    j(1, 1) = a2 - b21 * x.x1 - 2.0 * b22 * x.x2 - c2 * x.x3 * (alpha + gamma * x.x3) / den2sq;
    j(1, 2) = -c2 * x.x2 * (alpha + beta * x.x2) / den2sq;
    j(2, 0) = x.x3 * d1 * (alpha + gamma * x.x3) / den1sq;
    j(2, 1) = x.x3 * d2 * (alpha + gamma * x.x3) / den2sq;
    j(2, 2) = (-a3 + d1 * x.x1 / den1 + d2 * x.x2 / den2) -
              x.x3 * gamma * (d1 * x.x1 / den1sq + d2 * x.x2 / den2sq);
    return j;
}

Eigen::Matrix2d boundary_jacobian(const CoefficientSet& p, double t, double x1, double x2) {
    Eigen::Matrix2d j;
    j(0, 0) = p.a1()(t) - 2.0 * p.b11()(t) * x1 - p.b12()(t) * x2;
    j(0, 1) = -p.b12()(t) * x1;
    j(1, 0) = -p.b21()(t) * x2;
    j(1, 1) = p.a2()(t) - p.b21()(t) * x1 - 2.0 * p.b22()(t) * x2;
    return j;
}

double logistic_jacobian(const PeriodicCoefficient& a, const PeriodicCoefficient& b, double t,
                         double x) {
    return a(t) - 2.0 * b(t) * x;
}

OdeField full_ode(const CoefficientSet& p) {
    return [p](double t, std::span<const double> y, std::span<double> dydt) {
        const auto f = full_field(p, t, State{y[0], y[1], y[2]});
        dydt[0] = f[0];
        dydt[1] = f[1];
        dydt[2] = f[2];
    };
}

OdeField boundary_ode(const CoefficientSet& p) {
    return [p](double t, std::span<const double> y, std::span<double> dydt) {
        const auto f = boundary_field(p, t, y[0], y[1]);
        dydt[0] = f[0];
        dydt[1] = f[1];
    };
}

OdeField logistic_ode(const PeriodicCoefficient& a, const PeriodicCoefficient& b) {
    return [a, b](double t, std::span<const double> y, std::span<double> dydt) {
        dydt[0] = logistic_field(a, b, t, y[0]);
    };
}

OdeField log_ode(const CoefficientSet& p) {
    return [p](double t, std::span<const double> y, std::span<double> dydt) {
        const auto f = log_field(p, t, LogState{y[0], y[1], y[2]});
        dydt[0] = f[0];
        dydt[1] = f[1];
        dydt[2] = f[2];
    };
}

}  // namespace perilotka
