#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "perilotka/coefficients.hpp"

using namespace perilotka;

namespace {

constexpr double kOmega = std::numbers::pi / 4.0;

PeriodicCoefficient wave(double mean, double sin_amp, double cos_amp, const char* name = "") {
    std::vector<Harmonic> h;
    if (sin_amp != 0.0 || cos_amp != 0.0) h.push_back({1, sin_amp, cos_amp});
    return PeriodicCoefficient(kOmega, mean, std::move(h), name);
}

PeriodicCoefficient random_series(std::mt19937& gen) {
    std::uniform_real_distribution<double> amp(-2.0, 2.0);
    std::uniform_int_distribution<int> nharm(0, 3);
    std::vector<Harmonic> h;
    const int n = nharm(gen);
    for (int k = 1; k <= n; ++k) h.push_back({k, amp(gen), amp(gen)});
    return PeriodicCoefficient(kOmega, amp(gen), std::move(h));
}

}  // namespace

TEST_CASE("point evaluation of trigonometric series") {
    const PeriodicCoefficient f = wave(3.0, 1.0, 0.0);
    CHECK(f(0.0) == 3.0);
    CHECK(f(std::numbers::pi / 16.0) == 4.0);

    const PeriodicCoefficient c(kOmega, 2.0);
    CHECK(c(17.3) == 2.0);
}

TEST_CASE("construction rejects bad periods and harmonics") {
    CHECK_THROWS_AS(PeriodicCoefficient(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(PeriodicCoefficient(-1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(PeriodicCoefficient(1.0, 1.0, {{0, 1.0, 0.0}}), std::invalid_argument);
}

TEST_CASE("period average: exact for series, quadrature for expressions") {
    CHECK(hat_mean(wave(3.0, 1.0, 0.0)) == 3.0);
    CHECK(hat_mean(PeriodicCoefficient(kOmega, -1.75)) == -1.75);

    // quotient of the c1/gamma kind, against a dense composite-Simpson oracle
    const PeriodicCoefficient c1 = wave(0.5, -0.4, 0.0, "c1");
    const PeriodicCoefficient gamma = wave(2.0, -1.0, 0.0, "gamma");
    const CoefficientExpr expr = CoefficientExpr(c1) / CoefficientExpr(gamma);
    const double oracle =
        oracles::simpson_fixed([&](double t) { return c1(t) / gamma(t); }, 0.0, kOmega, 1000000) /
        kOmega;
    CHECK(std::abs(hat_mean(expr) - oracle) < 1e-10);
    // analytic value 0.4 - 0.3/sqrt(3)
    CHECK(std::abs(hat_mean(expr) - (0.4 - 0.3 / std::sqrt(3.0))) < 1e-10);
}

TEST_CASE("extremes of series and products") {
    const Extremes sine = sup_inf(wave(3.0, 1.0, 0.0));
    CHECK(sine.sup == 4.0);
    CHECK(sine.inf == 2.0);

    const Extremes cosine = sup_inf(wave(0.3, 0.0, 0.2));
    CHECK(cosine.sup == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(cosine.inf == doctest::Approx(0.1).epsilon(1e-14));

    // product with an interior maximum; expected values frozen from the
    // brute-force grid oracle (min 11.84 at cos=1, max 289/24 interior)
    const PeriodicCoefficient u = wave(3.0, 0.0, 0.2);
    const PeriodicCoefficient v = wave(4.0, 0.0, -0.3);
    const CoefficientExpr product = CoefficientExpr(u) * CoefficientExpr(v);
    const auto oracle = oracles::grid_extremes([&](double t) { return u(t) * v(t); }, 0.0, kOmega,
                                               1000000);
    const Extremes ext = sup_inf(product);
    CHECK(std::abs(ext.inf - oracle.min_value) < 1e-8);
    CHECK(std::abs(ext.sup - oracle.max_value) < 1e-8);
    CHECK(std::abs(ext.inf - 11.84) < 1e-8);
    CHECK(std::abs(ext.sup - 289.0 / 24.0) < 1e-8);
}

TEST_CASE("positivity check") {
    CHECK(check_positive(wave(3.0, 1.0, 0.0)).positive);

    const PositivityCheck bare_sine = check_positive(wave(0.0, 1.0, 0.0));
    CHECK_FALSE(bare_sine.positive);
    REQUIRE(bare_sine.violation_t.has_value());
    // attains -1 near 3*pi/16
    CHECK(std::abs(*bare_sine.violation_t - 3.0 * std::numbers::pi / 16.0) < 1e-6);

    CHECK_FALSE(check_positive(PeriodicCoefficient(kOmega, 0.0)).positive);
}

TEST_CASE("average is linear") {
    std::mt19937 gen(12345);
    std::uniform_real_distribution<double> scalar(-3.0, 3.0);
    for (int rep = 0; rep < 20; ++rep) {
        const PeriodicCoefficient f = random_series(gen);
        const PeriodicCoefficient g = random_series(gen);
        const double a = scalar(gen);
        const double b = scalar(gen);
        const PeriodicCoefficient af(kOmega, a, {});
        const PeriodicCoefficient bf(kOmega, b, {});
        const CoefficientExpr combo =
            CoefficientExpr(af) * CoefficientExpr(f) + CoefficientExpr(bf) * CoefficientExpr(g);
        CHECK(std::abs(hat_mean(combo) - (a * hat_mean(f) + b * hat_mean(g))) < 1e-12);
    }
}

TEST_CASE("evaluation is periodic") {
    std::mt19937 gen(987);
    std::uniform_real_distribution<double> time(-5.0 * kOmega, 5.0 * kOmega);
    const PeriodicCoefficient f = random_series(gen);
    for (int rep = 0; rep < 100; ++rep) {
        const double t = time(gen);
        CHECK(std::abs(f(t) - f(t + kOmega)) < 1e-12);
    }
}

TEST_CASE("extremes bracket both the values and the average") {
    std::mt19937 gen(2024);
    std::uniform_real_distribution<double> time(0.0, kOmega);
    for (int rep = 0; rep < 5; ++rep) {
        const PeriodicCoefficient f = random_series(gen);
        const Extremes ext = sup_inf(f);
        for (int i = 0; i < 1000; ++i) {
            const double v = f(time(gen));
            CHECK(v <= ext.sup + 1e-12);
            CHECK(v >= ext.inf - 1e-12);
        }
        const double mean = hat_mean(f);
        CHECK(mean <= ext.sup + 1e-12);
        CHECK(mean >= ext.inf - 1e-12);
    }
}

TEST_CASE("expression averages match the fixed-grid Simpson oracle") {
    const PeriodicCoefficient a = wave(1.2, 0.7, -0.3, "a");
    const PeriodicCoefficient b = wave(4.0, 0.0, 1.5, "b");
    const SampledPeriodicFunction s = SampledPeriodicFunction::from_function(
        kOmega, 128, [](double t) { return 2.0 + std::sin(8.0 * t) * std::cos(16.0 * t); }, "s");

    const CoefficientExpr exprs[] = {
        CoefficientExpr(a) * CoefficientExpr(b),
        CoefficientExpr(a) - CoefficientExpr(b) * CoefficientExpr(a),
        CoefficientExpr(a) / CoefficientExpr(b),
        CoefficientExpr(s) * CoefficientExpr(a) + CoefficientExpr(b),
    };
    for (const CoefficientExpr& e : exprs) {
        const double oracle =
            oracles::simpson_fixed([&](double t) { return e(t); }, 0.0, kOmega, 200000) / kOmega;
        CHECK(std::abs(hat_mean(e) - oracle) < 1e-9);
    }
}

TEST_CASE("sampled functions interpolate smoothly and wrap around") {
    auto fn = [](double t) { return 1.5 + 0.4 * std::sin(8.0 * t) - 0.2 * std::cos(16.0 * t); };
    const SampledPeriodicFunction s =
        SampledPeriodicFunction::from_function(kOmega, 64, fn, "s");

    CHECK(std::abs(s.values()[0] - s(kOmega)) < 1e-12);  // wrap-around continuity
    for (int i = 0; i < 200; ++i) {
        const double t = kOmega * static_cast<double>(i) / 200.0;
        CHECK(std::abs(s(t) - fn(t)) < 1e-5);
    }
    // derivative of the spline tracks the analytic derivative
    auto dfn = [](double t) { return 0.4 * 8.0 * std::cos(8.0 * t) + 0.2 * 16.0 * std::sin(16.0 * t); };
    for (int i = 0; i < 50; ++i) {
        const double t = kOmega * static_cast<double>(i) / 50.0;
        CHECK(std::abs(s.derivative(t) - dfn(t)) < 1e-3);
    }

    CHECK_THROWS_AS(SampledPeriodicFunction(kOmega, std::vector<double>(8, 1.0)),
                    std::invalid_argument);
}

TEST_CASE("expression construction guards") {
    const PeriodicCoefficient a = wave(1.0, 0.5, 0.0, "a");
    const PeriodicCoefficient other(2.0 * kOmega, 1.0, {}, "other");
    CHECK_THROWS_AS(CoefficientExpr(a) + CoefficientExpr(other), std::invalid_argument);

    // denominator crossing zero is rejected at construction, naming the node
    const PeriodicCoefficient crossing = wave(0.0, 1.0, 0.0, "crossing");
    try {
        const CoefficientExpr bad = CoefficientExpr(a) / CoefficientExpr(crossing);
        FAIL("expected domain_error");
    } catch (const std::domain_error& err) {
        CHECK(std::string(err.what()).find("crossing") != std::string::npos);
    }
}

TEST_CASE("quadrature reports non-convergence with its estimate") {
    // max_depth too small to resolve the requested tolerance
    try {
        integrate_adaptive([](double t) { return std::sin(40.0 * t * t); }, 0.0, 3.0, 1e-14, 2);
        FAIL("expected QuadratureError");
    } catch (const QuadratureError& err) {
        CHECK(std::isfinite(err.estimate()));
    }
}

TEST_CASE("time shift rotates harmonics exactly") {
    const PeriodicCoefficient f = wave(1.0, 0.7, -0.4);
    const PeriodicCoefficient g = f.shifted(0.123);
    for (int i = 0; i < 50; ++i) {
        const double t = kOmega * static_cast<double>(i) / 50.0;
        CHECK(std::abs(g(t) - f(t + 0.123)) < 1e-14);
    }
}
