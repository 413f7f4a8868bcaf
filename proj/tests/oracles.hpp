#pragma once

// Test-only oracles, deliberately independent of the library's numerical
// paths: fixed-grid composite Simpson, brute-force grid extremes, and a
// classic fixed-step RK4 marcher.

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace oracles {

inline double simpson_fixed(const std::function<double(double)>& f, double a, double b,
                            std::size_t intervals) {
    if (intervals % 2 != 0) throw std::invalid_argument("simpson_fixed: even interval count");
    const double h = (b - a) / static_cast<double>(intervals);
    double sum = f(a) + f(b);
    for (std::size_t i = 1; i < intervals; ++i) {
        sum += f(a + h * static_cast<double>(i)) * (i % 2 ? 4.0 : 2.0);
    }
    return sum * h / 3.0;
}

struct GridExtremes {
    double max_value;
    double max_arg;
    double min_value;
    double min_arg;
};

inline GridExtremes grid_extremes(const std::function<double(double)>& f, double lo, double hi,
                                  std::size_t points) {
    GridExtremes g{f(lo), lo, f(lo), lo};
    for (std::size_t i = 1; i < points; ++i) {
        const double t = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
        const double v = f(t);
        if (v > g.max_value) {
            g.max_value = v;
            g.max_arg = t;
        }
        if (v < g.min_value) {
            g.min_value = v;
            g.min_arg = t;
        }
    }
    return g;
}

using Rhs = std::function<void(double, std::span<const double>, std::span<double>)>;

inline std::vector<double> rk4_fixed(const Rhs& f, double t0, std::vector<double> y, double t1,
                                     std::size_t steps) {
    const std::size_t n = y.size();
    const double h = (t1 - t0) / static_cast<double>(steps);
    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
    double t = t0;
    for (std::size_t s = 0; s < steps; ++s) {
        f(t, y, k1);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
        f(t + 0.5 * h, tmp, k2);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
        f(t + 0.5 * h, tmp, k3);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
        f(t + h, tmp, k4);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        t = t0 + (t1 - t0) * static_cast<double>(s + 1) / static_cast<double>(steps);
    }
    return y;
}

}  // namespace oracles
