#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "perilotka/analysis.hpp"
#include "perilotka/dynamics.hpp"
#include "perilotka/integrator.hpp"
#include "perilotka/scenario.hpp"

using namespace perilotka;

namespace {

const OdeField kExpField = [](double, std::span<const double> y, std::span<double> d) {
    d[0] = y[0];
};

}  // namespace

TEST_CASE("constant logistic equilibrium stays put") {
    const PeriodicCoefficient one(std::numbers::pi / 4.0, 1.0);
    const OdeField f = logistic_ode(one, one);
    const double y0[1] = {1.0};
    const Trajectory traj = integrate(f, 0.0, y0, 10.0, {});
    CHECK(std::abs(traj.state_at(traj.steps())[0] - 1.0) < 1e-9);
}

TEST_CASE("exponential growth hits e") {
    const double y0[1] = {1.0};
    const Trajectory traj = integrate(kExpField, 0.0, y0, 1.0, {});
    CHECK(std::abs(traj.state_at(traj.steps())[0] - std::numbers::e) < 1e-8);
    CHECK(traj.t_end() == 1.0);
    CHECK(traj.stats().accepted == traj.steps());
    CHECK(traj.stats().field_evals > 6 * traj.steps());
}

TEST_CASE("self-convergence of the full system") {
    const ScenarioConfig fig1 = preset("fig1");
    const OdeField f = full_ode(fig1.coefficients);
    const double x0[3] = {0.5, 0.7, 1.0};

    IntegratorConfig coarse;  // rtol 1e-9, atol 1e-11
    IntegratorConfig fine;
    fine.rtol = coarse.rtol / 10.0;
    fine.atol = coarse.atol / 10.0;

    const std::vector<double> xc = flow(f, 0.0, x0, 50.0, coarse);
    const std::vector<double> xf = flow(f, 0.0, x0, 50.0, fine);
    for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(xc[i] - xf[i]) <= 10.0 * (coarse.rtol * std::abs(xc[i]) + coarse.atol));
    }
}

TEST_CASE("flow basics: zero duration, semigroup, coefficient periodicity") {
    const ScenarioConfig fig1 = preset("fig1");
    const double omega = fig1.coefficients.omega();
    const OdeField f = full_ode(fig1.coefficients);
    const double x0[3] = {0.5, 0.7, 1.0};

    const std::vector<double> same = flow(f, 0.0, x0, 0.0, {});
    CHECK(same[0] == 0.5);
    CHECK(same[1] == 0.7);
    CHECK(same[2] == 1.0);

    const std::vector<double> once = flow(f, 0.0, x0, omega, {});
    const std::vector<double> twice = flow(f, omega, once, omega, {});
    const std::vector<double> direct = flow(f, 0.0, x0, 2.0 * omega, {});
    for (int i = 0; i < 3; ++i) CHECK(std::abs(twice[i] - direct[i]) < 1e-8);

    const std::vector<double> shifted = flow(f, omega, x0, 1.3, {});
    const std::vector<double> base = flow(f, 0.0, x0, 1.3, {});
    for (int i = 0; i < 3; ++i) CHECK(std::abs(shifted[i] - base[i]) < 1e-8);
}

TEST_CASE("dense output: endpoints exact, interior accurate, continuous") {
    const double y0[1] = {1.0};
    const Trajectory traj = integrate(kExpField, 0.0, y0, 1.0, {});

    for (std::size_t i = 0; i <= traj.steps(); ++i) {
        CHECK(traj.sample(traj.time_at(i))[0] == traj.state_at(i)[0]);
    }
    CHECK(std::abs(traj.sample(0.5)[0] - std::sqrt(std::numbers::e)) < 1e-7);

    for (std::size_t i = 0; i + 1 < traj.steps(); ++i) {
        const double boundary = traj.time_at(i + 1);
        const double left = traj.sample_on_step(i, boundary)[0];
        const double right = traj.sample_on_step(i + 1, boundary)[0];
        CHECK(std::abs(left - right) < 1e-12);
    }

    CHECK_THROWS_AS(traj.sample(-0.1), std::out_of_range);
    CHECK_THROWS_AS(traj.sample(1.1), std::out_of_range);
}

TEST_CASE("sample error scales about linearly with the tolerance") {
    // convergence-order measurement: per-halving ratios carry controller
    // quantization noise, so the ladder is judged as a whole
    std::vector<double> errors;
    for (double tol = 1e-5; tol >= 0.9e-10; tol *= 0.5) {
        IntegratorConfig cfg;
        cfg.rtol = tol;
        cfg.atol = tol * 1e-4;
        const double y0[1] = {1.0};
        const Trajectory traj = integrate(kExpField, 0.0, y0, 10.0, cfg);
        errors.push_back(std::abs(traj.sample(5.0)[0] - std::exp(5.0)));
    }
    double worst_ratio = 0.0;
    for (std::size_t i = 1; i < errors.size(); ++i) {
        worst_ratio = std::max(worst_ratio, errors[i] / errors[i - 1]);
    }
    CHECK(worst_ratio < 0.65);
    const double halvings = static_cast<double>(errors.size() - 1);
    const double geo_ratio = std::pow(errors.back() / errors.front(), 1.0 / halvings);
    CHECK(geo_ratio < 0.56);
    const double slope = std::log(errors.front() / errors.back()) / (halvings * std::log(2.0));
    CHECK(slope >= 0.9);
}

TEST_CASE("embedded pair shows at least 4th order on x' = x") {
    auto endpoint_error = [](int n) {
        std::vector<double> y = {1.0};
        const double h = 1.0 / n;
        for (int i = 0; i < n; ++i) y = rk45_step(kExpField, i * h, y, h);
        return std::abs(y[0] - std::numbers::e);
    };
    const double e16 = endpoint_error(16);
    const double e32 = endpoint_error(32);
    const double order = std::log2(e16 / e32);
    CHECK(order >= 4.0);
}

TEST_CASE("nonnegativity under integration from random starts") {
    const ScenarioConfig fig1 = preset("fig1");
    const OdeField f = full_ode(fig1.coefficients);
    std::mt19937 gen(2468);
    std::uniform_real_distribution<double> d(0.0, 3.0);

    for (int rep = 0; rep < 50; ++rep) {
        double x0[3] = {d(gen), d(gen), d(gen)};
        if (rep % 7 == 0) x0[rep % 3] = 0.0;  // include exact boundary starts
        const Trajectory traj = integrate(f, 0.0, x0, 100.0, {});
        for (std::size_t i = 0; i <= traj.steps(); ++i) {
            const auto s = traj.state_at(i);
            CHECK(s[0] >= 0.0);
            CHECK(s[1] >= 0.0);
            CHECK(s[2] >= 0.0);
        }
        for (double t = 0.0; t <= 100.0; t += 0.25) {
            const auto s = traj.sample(t);
            CHECK(s[0] >= 0.0);
            CHECK(s[1] >= 0.0);
            CHECK(s[2] >= 0.0);
        }
    }
}

TEST_CASE("period-averaged balance holds on a numerically periodic window") {
    const ScenarioConfig fig1 = preset("fig1");
    const CoefficientSet& p = fig1.coefficients;
    const double omega = p.omega();
    const OdeField f = full_ode(p);
    const double x0[3] = {0.5, 0.7, 1.0};
    const Trajectory traj = integrate(f, 0.0, x0, 100.0, {});

    const double t0 = 95.0;
    double defect = 0.0;
    for (int k = 0; k <= 64; ++k) {
        const double t = t0 + omega * k / 64.0;
        const auto a = traj.sample(t);
        const auto b = traj.sample(t + omega);
        for (int i = 0; i < 3; ++i) defect = std::max(defect, std::abs(a[i] - b[i]));
    }
    REQUIRE(defect < 1e-6);  // precondition of the balance identities

    const auto residuals = periodic_balance_residuals(p, traj, t0);
    CHECK(residuals[0] < 1e-5);
    CHECK(residuals[1] < 1e-5);
    CHECK(residuals[2] < 1e-5);
}

TEST_CASE("failure carries the partial trajectory") {
    IntegratorConfig cfg;
    cfg.max_steps = 5;
    const double x0[1] = {1.0};
    try {
        integrate(kExpField, 0.0, x0, 100.0, cfg);
        FAIL("expected IntegrationError");
    } catch (const IntegrationError& err) {
        CHECK(err.partial().steps() >= 1);
        CHECK(err.partial().t_end() < 100.0);
        CHECK(err.partial().t_begin() == 0.0);
    }
}

TEST_CASE("config validation") {
    IntegratorConfig bad;
    bad.rtol = 0.0;
    const double x0[1] = {1.0};
    CHECK_THROWS_AS(integrate(kExpField, 0.0, x0, 1.0, bad), std::invalid_argument);

    IntegratorConfig neg_snap;
    neg_snap.nonneg_snap = -1.0;
    CHECK_THROWS_AS(integrate(kExpField, 0.0, x0, 1.0, neg_snap), std::invalid_argument);

    CHECK_THROWS_AS(integrate(kExpField, 0.0, x0, 0.0, {}), std::invalid_argument);
    CHECK_THROWS_AS(integrate(kExpField, 1.0, x0, 0.5, {}), std::invalid_argument);
}

TEST_CASE("explicit initial step is honored") {
    IntegratorConfig cfg;
    cfg.initial_step = 1e-3;  // small enough to pass error control unchanged
    const double x0[1] = {1.0};
    const Trajectory traj = integrate(kExpField, 0.0, x0, 1.0, cfg);
    CHECK(traj.time_at(1) == doctest::Approx(1e-3).epsilon(1e-12));
}
