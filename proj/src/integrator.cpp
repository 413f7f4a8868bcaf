#include "perilotka/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace perilotka {

namespace {

// Dormand-Prince 5(4) tableau with the standard 4th-order dense output.
constexpr double a21 = 0.2;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
constexpr double c2 = 0.2, c3 = 0.3, c4 = 0.8, c5 = 8.0 / 9.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

struct Workspace {
    std::size_t n;
    std::vector<double> k1, k2, k3, k4, k5, k6, k7, y1, ytmp;

    explicit Workspace(std::size_t dim)
        : n(dim), k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim), y1(dim),
          ytmp(dim) {}
};

// Runs stages 2..7 given k1 = f(t, y); fills y1 with the 5th-order result
// and k7 with f(t + h, y1).
void run_stages(const OdeField& f, double t, std::span<const double> y, double h, Workspace& w) {
    const std::size_t n = w.n;
    for (std::size_t i = 0; i < n; ++i) w.ytmp[i] = y[i] + h * a21 * w.k1[i];
    f(t + c2 * h, w.ytmp, w.k2);
    for (std::size_t i = 0; i < n; ++i) w.ytmp[i] = y[i] + h * (a31 * w.k1[i] + a32 * w.k2[i]);
    f(t + c3 * h, w.ytmp, w.k3);
    for (std::size_t i = 0; i < n; ++i)
        w.ytmp[i] = y[i] + h * (a41 * w.k1[i] + a42 * w.k2[i] + a43 * w.k3[i]);
    f(t + c4 * h, w.ytmp, w.k4);
    for (std::size_t i = 0; i < n; ++i)
        w.ytmp[i] = y[i] + h * (a51 * w.k1[i] + a52 * w.k2[i] + a53 * w.k3[i] + a54 * w.k4[i]);
    f(t + c5 * h, w.ytmp, w.k5);
    for (std::size_t i = 0; i < n; ++i)
        w.ytmp[i] = y[i] + h * (a61 * w.k1[i] + a62 * w.k2[i] + a63 * w.k3[i] + a64 * w.k4[i] +
                                a65 * w.k5[i]);
    f(t + h, w.ytmp, w.k6);
    for (std::size_t i = 0; i < n; ++i)
        w.y1[i] = y[i] + h * (a71 * w.k1[i] + a73 * w.k3[i] + a74 * w.k4[i] + a75 * w.k5[i] +
                              a76 * w.k6[i]);
    f(t + h, w.y1, w.k7);
}

double error_norm(const Workspace& w, std::span<const double> y0, double h, double rtol,
                  double atol) {
    double sum = 0.0;
    for (std::size_t i = 0; i < w.n; ++i) {
        const double est = h * (e1 * w.k1[i] + e3 * w.k3[i] + e4 * w.k4[i] + e5 * w.k5[i] +
                                e6 * w.k6[i] + e7 * w.k7[i]);
        const double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(w.y1[i]));
        sum += (est / sc) * (est / sc);
    }
    return std::sqrt(sum / static_cast<double>(w.n));
}

double initial_step(const OdeField& f, double t0, std::span<const double> y0,
                    std::span<const double> f0, double t_end, double rtol, double atol,
                    std::size_t* evals) {
    const std::size_t n = y0.size();
    double d0 = 0.0, dd1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double sc = atol + rtol * std::abs(y0[i]);
        d0 += (y0[i] / sc) * (y0[i] / sc);
        dd1 += (f0[i] / sc) * (f0[i] / sc);
    }
    d0 = std::sqrt(d0 / static_cast<double>(n));
    dd1 = std::sqrt(dd1 / static_cast<double>(n));
    double h0 = (d0 < 1e-5 || dd1 < 1e-5) ? 1e-6 : 0.01 * d0 / dd1;
    h0 = std::min(h0, t_end - t0);

    std::vector<double> y1(n), f1(n);
    for (std::size_t i = 0; i < n; ++i) y1[i] = y0[i] + h0 * f0[i];
    f(t0 + h0, y1, f1);
    ++*evals;

    double d2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double sc = atol + rtol * std::abs(y0[i]);
        d2 += ((f1[i] - f0[i]) / sc) * ((f1[i] - f0[i]) / sc);
    }
    d2 = std::sqrt(d2 / static_cast<double>(n)) / h0;

    const double d_max = std::max(dd1, d2);
    const double h1 = d_max <= 1e-15 ? std::max(1e-6, h0 * 1e-3)
                                     : std::pow(0.01 / d_max, 0.2);
    return std::min({100.0 * h0, h1, t_end - t0});
}

}  // namespace

void IntegratorConfig::validate() const {
    if (!(rtol > 0.0) || !(atol > 0.0)) {
        throw std::invalid_argument("IntegratorConfig: tolerances must be positive");
    }
    if (max_steps < 1) {
        throw std::invalid_argument("IntegratorConfig: max_steps must be at least 1");
    }
    if (nonneg_snap < 0.0) {
        throw std::invalid_argument("IntegratorConfig: snap threshold must be nonnegative");
    }
}

std::span<const double> Trajectory::state_at(std::size_t i) const {
    if (i >= times_.size()) throw std::out_of_range("Trajectory: step index out of range");
    return {states_.data() + i * dim_, dim_};
}

std::size_t Trajectory::locate_step(double t) const {
    if (t < times_.front() || t > times_.back()) {
        std::ostringstream msg;
        msg << "Trajectory: t=" << t << " outside [" << times_.front() << ", " << times_.back()
            << "]";
        throw std::out_of_range(msg.str());
    }
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    std::size_t idx = static_cast<std::size_t>(it - times_.begin());
    if (idx > 0) --idx;
    if (idx >= steps()) idx = steps() - 1;
    return idx;
}

void Trajectory::eval_dense(std::size_t step, double t, std::span<double> out) const {
    const double t0 = times_[step];
    const double h = times_[step + 1] - t0;
    const double theta = (t - t0) / h;
    const double theta1 = 1.0 - theta;
    const double* c = dense_.data() + step * 5 * dim_;
    for (std::size_t i = 0; i < dim_; ++i) {
        out[i] = c[i] +
                 theta * (c[dim_ + i] +
                          theta1 * (c[2 * dim_ + i] +
                                    theta * (c[3 * dim_ + i] + theta1 * c[4 * dim_ + i])));
        if (snap_ > 0.0 && out[i] < 0.0 && out[i] > -snap_) out[i] = 0.0;
    }
}

void Trajectory::sample_into(double t, std::span<double> out) const {
    const std::size_t step = locate_step(t);
    if (t == times_[step]) {
        std::copy_n(states_.data() + step * dim_, dim_, out.begin());
        return;
    }
    if (t == times_[step + 1]) {
        std::copy_n(states_.data() + (step + 1) * dim_, dim_, out.begin());
        return;
    }
    eval_dense(step, t, out);
}

std::vector<double> Trajectory::sample(double t) const {
    std::vector<double> out(dim_);
    sample_into(t, out);
    return out;
}

std::vector<double> Trajectory::sample_on_step(std::size_t step, double t) const {
    if (step >= steps()) throw std::out_of_range("Trajectory: step index out of range");
    std::vector<double> out(dim_);
    eval_dense(step, t, out);
    return out;
}

Trajectory integrate(const OdeField& f, double t0, std::span<const double> y0, double t_end,
                     const IntegratorConfig& cfg) {
    cfg.validate();
    if (!(t_end > t0)) throw std::invalid_argument("integrate: t_end must exceed t0");
    const std::size_t n = y0.size();
    if (n == 0) throw std::invalid_argument("integrate: empty state");

    Trajectory traj;
    traj.dim_ = n;
    traj.snap_ = cfg.nonneg_snap;
    traj.stats_.rtol = cfg.rtol;
    traj.stats_.atol = cfg.atol;
    traj.times_.push_back(t0);
    traj.states_.assign(y0.begin(), y0.end());

    Workspace w(n);
    std::vector<double> y(y0.begin(), y0.end());
    double t = t0;

    f(t, y, w.k1);
    ++traj.stats_.field_evals;

    double h = cfg.initial_step > 0.0
                   ? std::min(cfg.initial_step, t_end - t0)
                   : initial_step(f, t0, y, w.k1, t_end, cfg.rtol, cfg.atol,
                                  &traj.stats_.field_evals);

    bool rejected_last = false;
    std::size_t attempts = 0;

    auto fail = [&](const std::string& why) {
        std::ostringstream msg;
        msg << why << " at t=" << t << " (accepted " << traj.stats_.accepted << ", rejected "
            << traj.stats_.rejected << ")";
        throw IntegrationError(msg.str(), std::move(traj));
    };

    while (t < t_end) {
        if (++attempts > cfg.max_steps) fail("maximum step count exceeded");
        const double hmin = 16.0 * std::numeric_limits<double>::epsilon() *
                            std::max({std::abs(t), std::abs(t_end), 1.0});
        if (h < hmin) fail("step size underflow");

        bool final_step = false;
        if (t + h >= t_end) {
            h = t_end - t;
            final_step = true;
        }

        run_stages(f, t, y, h, w);
        traj.stats_.field_evals += 6;
        const double err = error_norm(w, y, h, cfg.rtol, cfg.atol);

        if (err <= 1.0) {
            // accepted: snap roundoff-negative components to the invariant plane
            bool snapped = false;
            if (cfg.nonneg_snap > 0.0) {
                for (std::size_t i = 0; i < n; ++i) {
                    if (w.y1[i] < 0.0 && w.y1[i] > -cfg.nonneg_snap) {
                        w.y1[i] = 0.0;
                        snapped = true;
                    }
                }
            }
            if (snapped) {
                f(t + h, w.y1, w.k7);
                ++traj.stats_.field_evals;
            }

            const std::size_t base = traj.dense_.size();
            traj.dense_.resize(base + 5 * n);
            double* c = traj.dense_.data() + base;
            for (std::size_t i = 0; i < n; ++i) {
                const double ydiff = w.y1[i] - y[i];
                const double bspl = h * w.k1[i] - ydiff;
                c[i] = y[i];
                c[n + i] = ydiff;
                c[2 * n + i] = bspl;
                c[3 * n + i] = ydiff - h * w.k7[i] - bspl;
                c[4 * n + i] = h * (d1 * w.k1[i] + d3 * w.k3[i] + d4 * w.k4[i] + d5 * w.k5[i] +
                                    d6 * w.k6[i] + d7 * w.k7[i]);
            }

            t = final_step ? t_end : t + h;
            y = w.y1;
            w.k1 = w.k7;  // first-same-as-last
            traj.times_.push_back(t);
            traj.states_.insert(traj.states_.end(), y.begin(), y.end());
            ++traj.stats_.accepted;

            const double fac = err == 0.0 ? 10.0 : 0.9 * std::pow(err, -0.2);
            const double facmax = rejected_last ? 1.0 : 10.0;
            h *= std::clamp(fac, 0.2, facmax);
            rejected_last = false;
        } else {
            ++traj.stats_.rejected;
            h *= std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0);
            rejected_last = true;
        }
    }
    return traj;
}

std::vector<double> flow(const OdeField& f, double t0, std::span<const double> y0,
                         double duration, const IntegratorConfig& cfg) {
    if (duration == 0.0) return std::vector<double>(y0.begin(), y0.end());
    const Trajectory traj = integrate(f, t0, y0, t0 + duration, cfg);
    const auto end = traj.state_at(traj.steps());
    return std::vector<double>(end.begin(), end.end());
}

std::vector<double> rk45_step(const OdeField& f, double t, std::span<const double> y, double h,
                              std::vector<double>* embedded_err) {
    Workspace w(y.size());
    f(t, y, w.k1);
    run_stages(f, t, y, h, w);
    if (embedded_err) {
        embedded_err->resize(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) {
            (*embedded_err)[i] = h * (e1 * w.k1[i] + e3 * w.k3[i] + e4 * w.k4[i] + e5 * w.k5[i] +
                                      e6 * w.k6[i] + e7 * w.k7[i]);
        }
    }
    return w.y1;
}

}  // namespace perilotka
