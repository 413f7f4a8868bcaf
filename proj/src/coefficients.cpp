#include "perilotka/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <variant>

namespace perilotka {

namespace {

struct QuadContext {
    const std::function<double(double)>& f;
    int max_depth;
    double unresolved = 0.0;
};

double simpson_refine(QuadContext& ctx, double a, double m, double b, double fa, double fm,
                      double fb, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = ctx.f(lm);
    const double frm = ctx.f(rm);
    const double h12 = (b - a) / 12.0;
    const double left = h12 * (fa + 4.0 * flm + fm);
    const double right = h12 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol || depth >= ctx.max_depth) {
        if (std::abs(delta) > 15.0 * tol) ctx.unresolved += std::abs(delta) / 15.0;
        return left + right + delta / 15.0;
    }
    return simpson_refine(ctx, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           simpson_refine(ctx, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, int max_depth) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    QuadContext ctx{f, max_depth};
    const double value = simpson_refine(ctx, a, m, b, fa, fm, fb, whole, abs_tol, 0);
    if (ctx.unresolved > abs_tol) {
        std::ostringstream msg;
        msg << "adaptive quadrature did not converge to " << abs_tol << " (unresolved error "
            << ctx.unresolved << ", estimate " << value << ")";
        throw QuadratureError(msg.str(), value);
    }
    return value;
}

// ---------------------------------------------------------------------------
// PeriodicCoefficient
// ---------------------------------------------------------------------------

PeriodicCoefficient::PeriodicCoefficient(double omega, double mean,
                                         std::vector<Harmonic> harmonics, std::string name)
    : omega_(omega), mean_(mean), harmonics_(std::move(harmonics)), name_(std::move(name)) {
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        throw std::invalid_argument("PeriodicCoefficient: period must be positive and finite");
    }
    if (!std::isfinite(mean)) {
        throw std::invalid_argument("PeriodicCoefficient: mean term must be finite");
    }
    for (const Harmonic& h : harmonics_) {
        if (h.k < 1) throw std::invalid_argument("PeriodicCoefficient: harmonic index k must be >= 1");
        if (!std::isfinite(h.sin_amp) || !std::isfinite(h.cos_amp)) {
            throw std::invalid_argument("PeriodicCoefficient: harmonic amplitudes must be finite");
        }
    }
}

double PeriodicCoefficient::operator()(double t) const {
    const double base = 2.0 * std::numbers::pi / omega_;
    double v = mean_;
    for (const Harmonic& h : harmonics_) {
        const double phase = h.k * base * t;
        v += h.sin_amp * std::sin(phase) + h.cos_amp * std::cos(phase);
    }
    return v;
}

double PeriodicCoefficient::antiderivative(double t) const {
    const double base = 2.0 * std::numbers::pi / omega_;
    double v = mean_ * t;
    for (const Harmonic& h : harmonics_) {
        const double w = h.k * base;
        v += h.sin_amp / w * (1.0 - std::cos(w * t)) + h.cos_amp / w * std::sin(w * t);
    }
    return v;
}

PeriodicCoefficient PeriodicCoefficient::shifted(double dt) const {
    const double base = 2.0 * std::numbers::pi / omega_;
    std::vector<Harmonic> out;
    out.reserve(harmonics_.size());
    for (const Harmonic& h : harmonics_) {
        const double phi = h.k * base * dt;
        const double c = std::cos(phi);
        const double s = std::sin(phi);
        out.push_back({h.k, h.sin_amp * c - h.cos_amp * s, h.sin_amp * s + h.cos_amp * c});
    }
    return PeriodicCoefficient(omega_, mean_, std::move(out), name_);
}

PeriodicCoefficient PeriodicCoefficient::renamed(std::string name) const {
    PeriodicCoefficient copy = *this;
    copy.name_ = std::move(name);
    return copy;
}

// ---------------------------------------------------------------------------
// SampledPeriodicFunction
// ---------------------------------------------------------------------------

SampledPeriodicFunction::SampledPeriodicFunction(double omega, std::vector<double> values,
                                                 std::string name)
    : omega_(omega), values_(std::move(values)), name_(std::move(name)) {
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        throw std::invalid_argument("SampledPeriodicFunction: period must be positive and finite");
    }
    if (values_.size() < 16) {
        throw std::invalid_argument("SampledPeriodicFunction: at least 16 samples required");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("SampledPeriodicFunction: samples must be finite");
        }
    }
    build_spline();
}

SampledPeriodicFunction SampledPeriodicFunction::from_function(
    double omega, std::size_t samples, const std::function<double(double)>& f, std::string name) {
    std::vector<double> values(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        values[i] = f(static_cast<double>(i) * omega / static_cast<double>(samples));
    }
    return SampledPeriodicFunction(omega, std::move(values), std::move(name));
}

// Periodic natural cubic spline on a uniform grid. The cyclic tridiagonal
// system  m[i-1] + 4 m[i] + m[i+1] = 6 (y[i-1] - 2 y[i] + y[i+1]) / h^2
// is solved by the Sherman-Morrison reduction to two ordinary tridiagonal
// solves.
void SampledPeriodicFunction::build_spline() {
    const std::size_t n = values_.size();
    const double h = omega_ / static_cast<double>(n);
    std::vector<double> rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double ym = values_[(i + n - 1) % n];
        const double yp = values_[(i + 1) % n];
        rhs[i] = 6.0 * (ym - 2.0 * values_[i] + yp) / (h * h);
    }

    auto solve_tridiag = [n](const std::vector<double>& diag, const std::vector<double>& r) {
        std::vector<double> c(n, 0.0), x(n, 0.0);
        c[0] = 1.0 / diag[0];
        x[0] = r[0] / diag[0];
        for (std::size_t i = 1; i < n; ++i) {
            const double m = diag[i] - c[i - 1];
            c[i] = 1.0 / m;
            x[i] = (r[i] - x[i - 1]) / m;
        }
        for (std::size_t i = n - 1; i-- > 0;) {
            x[i] -= c[i] * x[i + 1];
        }
        return x;
    };

    // Corner-modified diagonal: gamma absorbs the wrap-around couplings.
    const double gamma = -4.0;
    std::vector<double> diag(n, 4.0);
    diag[0] -= gamma;
    diag[n - 1] -= 1.0 / gamma;

    std::vector<double> u(n, 0.0);
    u[0] = gamma;
    u[n - 1] = 1.0;

    const std::vector<double> y = solve_tridiag(diag, rhs);
    const std::vector<double> z = solve_tridiag(diag, u);
    const double factor = (y[0] + y[n - 1] / gamma) / (1.0 + z[0] + z[n - 1] / gamma);

    second_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        second_[i] = y[i] - factor * z[i];
    }
}

void SampledPeriodicFunction::locate(double t, std::size_t& i, double& theta) const {
    const std::size_t n = values_.size();
    double s = t - omega_ * std::floor(t / omega_);
    if (s >= omega_) s = 0.0;  // guards floor rounding at the seam
    const double h = omega_ / static_cast<double>(n);
    double fi = std::floor(s / h);
    if (fi >= static_cast<double>(n)) fi = static_cast<double>(n - 1);
    i = static_cast<std::size_t>(fi);
    theta = s / h - fi;
    if (theta < 0.0) theta = 0.0;
    if (theta > 1.0) theta = 1.0;
}

double SampledPeriodicFunction::operator()(double t) const {
    std::size_t i;
    double theta;
    locate(t, i, theta);
    const std::size_t n = values_.size();
    const double h = omega_ / static_cast<double>(n);
    const std::size_t j = (i + 1) % n;
    const double A = 1.0 - theta;
    const double B = theta;
    return A * values_[i] + B * values_[j] +
           ((A * A * A - A) * second_[i] + (B * B * B - B) * second_[j]) * h * h / 6.0;
}

double SampledPeriodicFunction::derivative(double t) const {
    std::size_t i;
    double theta;
    locate(t, i, theta);
    const std::size_t n = values_.size();
    const double h = omega_ / static_cast<double>(n);
    const std::size_t j = (i + 1) % n;
    const double A = 1.0 - theta;
    const double B = theta;
    return (values_[j] - values_[i]) / h +
           h / 6.0 * (-(3.0 * A * A - 1.0) * second_[i] + (3.0 * B * B - 1.0) * second_[j]);
}

double SampledPeriodicFunction::spline_mean() const {
    const std::size_t n = values_.size();
    const double h = omega_ / static_cast<double>(n);
    double sum_y = 0.0;
    double sum_m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sum_y += values_[i];
        sum_m += second_[i];
    }
    return (h * sum_y - h * h * h * sum_m / 12.0) / omega_;
}

// ---------------------------------------------------------------------------
// CoefficientExpr
// ---------------------------------------------------------------------------

struct CoefficientExpr::Node {
    struct Binary {
        char op;
        std::shared_ptr<const Node> lhs;
        std::shared_ptr<const Node> rhs;
    };
    std::variant<PeriodicCoefficient, SampledPeriodicFunction, Binary> payload;
    double omega;

    std::string describe() const {
        if (const auto* c = std::get_if<PeriodicCoefficient>(&payload)) {
            return c->name().empty() ? std::string("<series>") : c->name();
        }
        if (const auto* s = std::get_if<SampledPeriodicFunction>(&payload)) {
            return s->name().empty() ? std::string("<sampled>") : s->name();
        }
        const auto& b = std::get<Binary>(payload);
        return "(" + b.lhs->describe() + " " + b.op + " " + b.rhs->describe() + ")";
    }

    double eval(double t) const {
        if (const auto* c = std::get_if<PeriodicCoefficient>(&payload)) return (*c)(t);
        if (const auto* s = std::get_if<SampledPeriodicFunction>(&payload)) return (*s)(t);
        const auto& b = std::get<Binary>(payload);
        const double lhs = b.lhs->eval(t);
        const double rhs = b.rhs->eval(t);
        switch (b.op) {
            case '+': return lhs + rhs;
            case '-': return lhs - rhs;
            case '*': return lhs * rhs;
            default: {
                if (std::abs(rhs) < 1e-12) {
                    std::ostringstream msg;
                    msg << "division by near-zero denominator " << b.rhs->describe()
                        << " at t=" << t;
                    throw std::domain_error(msg.str());
                }
                return lhs / rhs;
            }
        }
    }
};

CoefficientExpr::CoefficientExpr(PeriodicCoefficient leaf) {
    const double omega = leaf.omega();
    root_ = std::make_shared<const Node>(Node{std::move(leaf), omega});
}

CoefficientExpr::CoefficientExpr(SampledPeriodicFunction leaf) {
    const double omega = leaf.omega();
    root_ = std::make_shared<const Node>(Node{std::move(leaf), omega});
}

CoefficientExpr::CoefficientExpr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

double CoefficientExpr::omega() const noexcept { return root_->omega; }

double CoefficientExpr::operator()(double t) const { return root_->eval(t); }

std::string CoefficientExpr::describe() const { return root_->describe(); }

const PeriodicCoefficient* CoefficientExpr::trig_leaf() const noexcept {
    return std::get_if<PeriodicCoefficient>(&root_->payload);
}

CoefficientExpr CoefficientExpr::combine(char op, const CoefficientExpr& a,
                                         const CoefficientExpr& b) {
    if (a.omega() != b.omega()) {
        throw std::invalid_argument("CoefficientExpr: operands must share one period");
    }
    auto node = std::make_shared<const Node>(Node{Node::Binary{op, a.root_, b.root_}, a.omega()});
    if (op == '/') {
        // The quotient is only admitted when the denominator stays bounded
        // away from zero over the whole period.
        constexpr std::size_t kGrid = 4096;
        const double omega = b.omega();
        double worst = std::numeric_limits<double>::infinity();
        double worst_t = 0.0;
        for (std::size_t i = 0; i <= kGrid; ++i) {
            const double t = omega * static_cast<double>(i) / static_cast<double>(kGrid);
            const double v = std::abs(b(t));
            if (v < worst) {
                worst = v;
                worst_t = t;
            }
        }
        if (worst < 1e-12) {
            std::ostringstream msg;
            msg << "denominator " << b.describe() << " is not bounded away from zero (|value| "
                << worst << " near t=" << worst_t << ")";
            throw std::domain_error(msg.str());
        }
    }
    return CoefficientExpr(std::move(node));
}

CoefficientExpr operator+(const CoefficientExpr& a, const CoefficientExpr& b) {
    return CoefficientExpr::combine('+', a, b);
}
CoefficientExpr operator-(const CoefficientExpr& a, const CoefficientExpr& b) {
    return CoefficientExpr::combine('-', a, b);
}
CoefficientExpr operator*(const CoefficientExpr& a, const CoefficientExpr& b) {
    return CoefficientExpr::combine('*', a, b);
}
CoefficientExpr operator/(const CoefficientExpr& a, const CoefficientExpr& b) {
    return CoefficientExpr::combine('/', a, b);
}

// ---------------------------------------------------------------------------
// hat, sup, inf
// ---------------------------------------------------------------------------

double hat_mean(const PeriodicCoefficient& f) { return f.mean_term(); }

double hat_mean(const CoefficientExpr& f, double abs_tol) {
    if (const PeriodicCoefficient* leaf = f.trig_leaf()) return leaf->mean_term();
    const double omega = f.omega();
    const double integral =
        integrate_adaptive([&f](double t) { return f(t); }, 0.0, omega, abs_tol * omega);
    return integral / omega;
}

double hat_mean(const SampledPeriodicFunction& f) { return f.spline_mean(); }

namespace {

// Golden-section maximization of g on [lo, hi] to bracket width t_tol.
// Returns the best (t, g(t)) pair encountered.
std::pair<double, double> golden_max(const std::function<double(double)>& g, double lo, double hi,
                                     double t_tol) {
    constexpr double kInvPhi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = g(x1), f2 = g(x2);
    double best_t = f1 >= f2 ? x1 : x2;
    double best_v = std::max(f1, f2);
    while (b - a > t_tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = g(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = g(x1);
        }
        if (f1 > best_v) { best_v = f1; best_t = x1; }
        if (f2 > best_v) { best_v = f2; best_t = x2; }
    }
    return {best_t, best_v};
}

Extremes sup_inf_impl(const std::function<double(double)>& f, double omega, std::size_t grid,
                      double t_tol) {
    const std::size_t n = std::max<std::size_t>(grid, 16);
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) {
        values[i] = f(omega * static_cast<double>(i) / static_cast<double>(n));
    }

    Extremes ext;
    std::size_t imax = 0, imin = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (values[i] > values[imax]) imax = i;
        if (values[i] < values[imin]) imin = i;
    }
    ext.sup = values[imax];
    ext.argmax = omega * static_cast<double>(imax) / static_cast<double>(n);
    ext.inf = values[imin];
    ext.argmin = omega * static_cast<double>(imin) / static_cast<double>(n);

    const double h = omega / static_cast<double>(n);
    auto neg = [&f](double t) { return -f(t); };

    for (std::size_t i = 0; i < n; ++i) {
        const double prev = values[(i + n - 1) % n];
        const double next = values[(i + 1) % n];
        const double t = omega * static_cast<double>(i) / static_cast<double>(n);
        // strict local maximum candidates, refined within the bracketing cell
        if (values[i] >= prev && values[i] >= next && (values[i] > prev || values[i] > next)) {
            auto [bt, bv] = golden_max(f, t - h, t + h, t_tol);
            if (bv > ext.sup) {
                ext.sup = bv;
                ext.argmax = bt < 0.0 ? bt + omega : bt;
            }
        }
        if (values[i] <= prev && values[i] <= next && (values[i] < prev || values[i] < next)) {
            auto [bt, bv] = golden_max(neg, t - h, t + h, t_tol);
            if (-bv < ext.inf) {
                ext.inf = -bv;
                ext.argmin = bt < 0.0 ? bt + omega : bt;
            }
        }
    }
    return ext;
}

}  // namespace

Extremes sup_inf(const PeriodicCoefficient& f, std::size_t grid, double t_tol) {
    return sup_inf_impl([&f](double t) { return f(t); }, f.omega(), grid, t_tol);
}

Extremes sup_inf(const CoefficientExpr& f, std::size_t grid, double t_tol) {
    return sup_inf_impl([&f](double t) { return f(t); }, f.omega(), grid, t_tol);
}

namespace {

PositivityCheck positivity_from(const Extremes& ext) {
    PositivityCheck check;
    check.min_value = ext.inf;
    check.positive = ext.inf > 0.0;
    if (!check.positive) check.violation_t = ext.argmin;
    return check;
}

}  // namespace

PositivityCheck check_positive(const PeriodicCoefficient& f) {
    return positivity_from(sup_inf(f));
}

PositivityCheck check_positive(const CoefficientExpr& f) {
    return positivity_from(sup_inf(f));
}

}  // namespace perilotka
