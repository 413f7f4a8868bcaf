#include "perilotka/orbits.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace perilotka {

std::size_t mode_dimension(OrbitMode mode) {
    switch (mode) {
        case OrbitMode::full: return 3;
        case OrbitMode::boundary: return 2;
        default: return 1;
    }
}

std::string mode_name(OrbitMode mode) {
    switch (mode) {
        case OrbitMode::full: return "full";
        case OrbitMode::boundary: return "boundary";
        case OrbitMode::logistic1: return "logistic-1";
        default: return "logistic-2";
    }
}

OrbitMode mode_from_name(const std::string& name) {
    if (name == "full") return OrbitMode::full;
    if (name == "boundary") return OrbitMode::boundary;
    if (name == "logistic-1") return OrbitMode::logistic1;
    if (name == "logistic-2") return OrbitMode::logistic2;
    throw std::invalid_argument("unknown orbit mode: " + name);
}

OdeField mode_ode(const CoefficientSet& p, OrbitMode mode) {
    switch (mode) {
        case OrbitMode::full: return full_ode(p);
        case OrbitMode::boundary: return boundary_ode(p);
        case OrbitMode::logistic1: return logistic_ode(p.a1(), p.b11());
        default: return logistic_ode(p.a2(), p.b22());
    }
}

namespace {

double wrap_period(double t, double omega) {
    double s = t - omega * std::floor(t / omega);
    if (s >= omega) s = 0.0;
    return s;
}

// Validates the guess zero-pattern for the mode and extracts the active
// coordinates.
std::vector<double> active_coordinates(OrbitMode mode, const State& guess) {
    auto positive = [](double v, const char* which) {
        if (!(v > 0.0)) {
            throw std::invalid_argument(std::string("find_orbit: guess component ") + which +
                                        " must be strictly positive in this mode");
        }
    };
    auto zero = [](double v, const char* which) {
        if (v != 0.0) {
            throw std::invalid_argument(std::string("find_orbit: guess component ") + which +
                                        " must be exactly zero in this mode");
        }
    };
    switch (mode) {
        case OrbitMode::full:
            positive(guess.x1, "x1");
            positive(guess.x2, "x2");
            positive(guess.x3, "x3");
            return {guess.x1, guess.x2, guess.x3};
        case OrbitMode::boundary:
            positive(guess.x1, "x1");
            positive(guess.x2, "x2");
            zero(guess.x3, "x3");
            return {guess.x1, guess.x2};
        case OrbitMode::logistic1:
            positive(guess.x1, "x1");
            zero(guess.x2, "x2");
            zero(guess.x3, "x3");
            return {guess.x1};
        default:
            positive(guess.x2, "x2");
            zero(guess.x1, "x1");
            zero(guess.x3, "x3");
            return {guess.x2};
    }
}

State embed(OrbitMode mode, std::span<const double> active) {
    switch (mode) {
        case OrbitMode::full: return State{active[0], active[1], active[2]};
        case OrbitMode::boundary: return State{active[0], active[1], 0.0};
        case OrbitMode::logistic1: return State{active[0], 0.0, 0.0};
        default: return State{0.0, active[0], 0.0};
    }
}

double inf_norm_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

std::vector<std::complex<double>> eigenvalues_sorted(const Eigen::MatrixXd& m) {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(m, false);
    std::vector<std::complex<double>> out(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) out[static_cast<std::size_t>(i)] = solver.eigenvalues()[i];
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return std::abs(a) > std::abs(b);
    });
    return out;
}

// Augmented field for the variational equations: the orbit state followed by
// the column-major fundamental matrix.
OdeField variational_ode(const CoefficientSet& p, OrbitMode mode) {
    const std::size_t d = mode_dimension(mode);
    const OdeField base = mode_ode(p, mode);
    return [p, mode, d, base](double t, std::span<const double> y, std::span<double> dydt) {
        base(t, y.subspan(0, d), dydt.subspan(0, d));
        Eigen::MatrixXd j;
        switch (mode) {
            case OrbitMode::full:
                j = full_jacobian(p, t, State{y[0], y[1], y[2]});
                break;
            case OrbitMode::boundary:
                j = boundary_jacobian(p, t, y[0], y[1]);
                break;
            case OrbitMode::logistic1:
                j = Eigen::MatrixXd::Constant(1, 1, logistic_jacobian(p.a1(), p.b11(), t, y[0]));
                break;
            default:
                j = Eigen::MatrixXd::Constant(1, 1, logistic_jacobian(p.a2(), p.b22(), t, y[0]));
                break;
        }
        const Eigen::Map<const Eigen::MatrixXd> fundamental(y.data() + d,
                                                            static_cast<Eigen::Index>(d),
                                                            static_cast<Eigen::Index>(d));
        Eigen::Map<Eigen::MatrixXd> out(dydt.data() + d, static_cast<Eigen::Index>(d),
                                        static_cast<Eigen::Index>(d));
        out = j * fundamental;
    };
}

Monodromy transport_matrix(const OdeField& field, std::span<const double> anchor, std::size_t d,
                           double omega, const IntegratorConfig& cfg) {
    std::vector<double> y0(d + d * d, 0.0);
    std::copy(anchor.begin(), anchor.end(), y0.begin());
    for (std::size_t i = 0; i < d; ++i) y0[d + i * d + i] = 1.0;

    IntegratorConfig vcfg = cfg;
    vcfg.nonneg_snap = 0.0;  // variational components are signed
    const std::vector<double> yT = flow(field, 0.0, y0, omega, vcfg);

    Monodromy result;
    result.matrix = Eigen::Map<const Eigen::MatrixXd>(yT.data() + d, static_cast<Eigen::Index>(d),
                                                      static_cast<Eigen::Index>(d));
    result.multipliers = eigenvalues_sorted(result.matrix);
    return result;
}

}  // namespace

std::vector<double> PeriodicOrbit::state_at(double t) const {
    return trajectory.sample(wrap_period(t, omega));
}

State PeriodicOrbit::full_state_at(double t) const {
    const std::vector<double> active = state_at(t);
    return embed(mode, active);
}

std::vector<double> poincare(const CoefficientSet& p, OrbitMode mode,
                             std::span<const double> x0, const IntegratorConfig& cfg) {
    return flow(mode_ode(p, mode), 0.0, x0, p.omega(), cfg);
}

State poincare(const CoefficientSet& p, const State& x0, const IntegratorConfig& cfg) {
    const double y0[3] = {x0.x1, x0.x2, x0.x3};
    const std::vector<double> y = poincare(p, OrbitMode::full, y0, cfg);
    return State{y[0], y[1], y[2]};
}

State default_guess(const CoefficientSet& p, OrbitMode mode, const State& initial, int periods,
                    const IntegratorConfig& cfg) {
    const std::vector<double> active = active_coordinates(mode, initial);
    const std::vector<double> settled =
        flow(mode_ode(p, mode), 0.0, active, periods * p.omega(), cfg);
    return embed(mode, settled);
}

PeriodicOrbit find_orbit(const CoefficientSet& p, const State& guess, OrbitMode mode,
                         const OrbitSolveOptions& opts) {
    const std::size_t d = mode_dimension(mode);
    const double omega = p.omega();
    const OdeField field = mode_ode(p, mode);

    auto map = [&](const std::vector<double>& x) { return flow(field, 0.0, x, omega, opts.integrator); };
    auto strictly_positive = [](const std::vector<double>& x) {
        return std::all_of(x.begin(), x.end(), [](double v) { return v > 0.0; });
    };

    std::vector<double> x = active_coordinates(mode, guess);
    std::vector<double> px = map(x);
    double res = inf_norm_diff(px, x);

    std::vector<double> best = x;
    double best_res = res;
    auto remember = [&](const std::vector<double>& cand, double r) {
        if (r < best_res) {
            best = cand;
            best_res = r;
        }
    };

    bool converged = res < opts.tol;

    for (int iter = 0; iter < opts.max_newton && !converged; ++iter) {
        // forward-difference Jacobian of G(x) = P(x) - x
        Eigen::MatrixXd jac(d, d);
        Eigen::VectorXd g(d);
        for (std::size_t i = 0; i < d; ++i) g(static_cast<Eigen::Index>(i)) = px[i] - x[i];
        for (std::size_t jcol = 0; jcol < d; ++jcol) {
            const double h = std::max(1e-7, 1e-7 * std::abs(x[jcol]));
            std::vector<double> xp = x;
            xp[jcol] += h;
            const std::vector<double> pxp = map(xp);
            for (std::size_t i = 0; i < d; ++i) {
                jac(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(jcol)) =
                    (pxp[i] - px[i]) / h - (i == jcol ? 1.0 : 0.0);
            }
        }

        const Eigen::VectorXd delta = jac.partialPivLu().solve(-g);

        // halve the step until the residual decreases and the iterate stays
        // inside the open positive cone
        double lambda = 1.0;
        bool improved = false;
        while (lambda > 1e-7) {
            std::vector<double> xn = x;
            for (std::size_t i = 0; i < d; ++i) xn[i] += lambda * delta(static_cast<Eigen::Index>(i));
            if (strictly_positive(xn)) {
                const std::vector<double> pxn = map(xn);
                const double rn = inf_norm_diff(pxn, xn);
                remember(xn, rn);
                if (rn < res) {
                    x = xn;
                    px = pxn;
                    res = rn;
                    improved = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if (res < opts.tol) {
            converged = true;
            break;
        }
        if (!improved) break;  // Newton stalled; fall back to map iteration
    }

    if (!converged) {
        x = best;
        px = map(x);
        res = inf_norm_diff(px, x);
        for (int k = 0; k < opts.max_map_iterations && res >= opts.tol; ++k) {
            if (!strictly_positive(px)) break;
            x = px;
            px = map(x);
            res = inf_norm_diff(px, x);
            remember(x, res);
        }
        converged = res < opts.tol;
    }

    if (!converged) {
        std::ostringstream msg;
        msg << "find_orbit(" << mode_name(mode) << "): no fixed point of the period map to "
            << opts.tol << " (best residual " << best_res << ")";
        throw OrbitSolveError(msg.str(), best, best_res);
    }

    PeriodicOrbit orbit;
    orbit.mode = mode;
    orbit.dimension = d;
    orbit.omega = omega;
    orbit.anchor = x;
    orbit.trajectory = integrate(field, 0.0, x, omega, opts.integrator);
    orbit.residual = inf_norm_diff(orbit.trajectory.state_at(orbit.trajectory.steps()), x);
    orbit.multipliers = monodromy(p, orbit, opts.integrator).multipliers;
    return orbit;
}

Monodromy monodromy(const CoefficientSet& p, const PeriodicOrbit& orbit,
                    const IntegratorConfig& cfg) {
    if (!(orbit.residual < 1e-6)) {
        throw std::invalid_argument("monodromy: orbit residual must be below 1e-6");
    }
    return transport_matrix(variational_ode(p, orbit.mode), orbit.anchor, orbit.dimension,
                            orbit.omega, cfg);
}

Monodromy embedded_monodromy(const CoefficientSet& p, const PeriodicOrbit& boundary_orbit,
                             const IntegratorConfig& cfg) {
    if (boundary_orbit.mode != OrbitMode::boundary) {
        throw std::invalid_argument("embedded_monodromy: expects a boundary orbit");
    }
    if (!(boundary_orbit.residual < 1e-6)) {
        throw std::invalid_argument("embedded_monodromy: orbit residual must be below 1e-6");
    }
    const std::vector<double> anchor = {boundary_orbit.anchor[0], boundary_orbit.anchor[1], 0.0};
    return transport_matrix(variational_ode(p, OrbitMode::full), anchor, 3,
                            boundary_orbit.omega, cfg);
}

double liouville_exponent(const CoefficientSet& p, const PeriodicOrbit& orbit, double quad_tol) {
    auto trace_at = [&](double t) {
        const std::vector<double> x = orbit.state_at(t);
        switch (orbit.mode) {
            case OrbitMode::full:
                return full_jacobian(p, t, State{x[0], x[1], x[2]}).trace();
            case OrbitMode::boundary:
                return boundary_jacobian(p, t, x[0], x[1]).trace();
            case OrbitMode::logistic1:
                return logistic_jacobian(p.a1(), p.b11(), t, x[0]);
            default:
                return logistic_jacobian(p.a2(), p.b22(), t, x[0]);
        }
    };
    return integrate_adaptive(trace_at, 0.0, orbit.omega, quad_tol);
}

SampledPeriodicFunction logistic_closed_form(const PeriodicCoefficient& a,
                                             const PeriodicCoefficient& b, std::size_t grid,
                                             double quad_tol) {
    if (!(a.mean_term() > 0.0)) {
        throw std::invalid_argument(
            "logistic_closed_form: mean growth rate must be positive for a positive periodic "
            "solution");
    }
    const double omega = a.omega();
    if (b.omega() != omega) {
        throw std::invalid_argument("logistic_closed_form: a and b must share one period");
    }
    const double growth = a.integral(0.0, omega);  // exact: harmonics cancel over a period
    const double numerator = std::expm1(growth);

    std::vector<double> values(grid);
    for (std::size_t i = 0; i < grid; ++i) {
        const double t = omega * static_cast<double>(i) / static_cast<double>(grid);
        const double denom = integrate_adaptive(
            [&](double s) { return b(s) * std::exp(a.integral(t, s)); }, t, t + omega, quad_tol);
        values[i] = numerator / denom;
    }
    std::string name = "Xbar";
    if (!a.name().empty()) name += "(" + a.name() + ")";
    return SampledPeriodicFunction(omega, std::move(values), std::move(name));
}

}  // namespace perilotka
