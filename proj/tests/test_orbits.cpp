#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "perilotka/orbits.hpp"
#include "perilotka/scenario.hpp"

using namespace perilotka;

namespace {

constexpr double kOmega = std::numbers::pi / 4.0;

PeriodicCoefficient constant(double v, const char* name = "") {
    return PeriodicCoefficient(kOmega, v, {}, name);
}

CoefficientSet constant_set(double value = 1.0) {
    const PeriodicCoefficient c = constant(value);
    return CoefficientSet(c, c, c, c, c, c, c, c, c, c, c, c, c, c);
}

CoefficientSet decoupled_constant_set() {
    return CoefficientSet(constant(1.0, "a1"), constant(1.0, "a2"), constant(1.0, "a3"),
                          constant(1.0, "b11"), constant(0.0, "b12"), constant(0.0, "b21"),
                          constant(1.0, "b22"), constant(0.0, "c1"), constant(0.0, "c2"),
                          constant(1.0, "d1"), constant(1.0, "d2"), constant(1.0, "alpha"),
                          constant(1.0, "beta"), constant(1.0, "gamma"),
                          Positivity::allow_zero);
}

}  // namespace

TEST_CASE("period map fixes the origin and constant equilibria") {
    const ScenarioConfig fig1 = preset("fig1");
    const double zeros[3] = {0.0, 0.0, 0.0};
    const auto image = poincare(fig1.coefficients, OrbitMode::full, zeros);
    CHECK(image[0] == 0.0);
    CHECK(image[1] == 0.0);
    CHECK(image[2] == 0.0);

    const CoefficientSet dec = decoupled_constant_set();
    const State eq = poincare(dec, State{1.0, 1.0, 0.0});
    CHECK(std::abs(eq.x1 - 1.0) < 1e-9);
    CHECK(std::abs(eq.x2 - 1.0) < 1e-9);
    CHECK(eq.x3 == 0.0);
}

TEST_CASE("period map agrees with an independent fixed-step RK4") {
    const ScenarioConfig fig1 = preset("fig1");
    const CoefficientSet& p = fig1.coefficients;
    const State mapped = poincare(p, State{0.5, 0.7, 1.0});

    const auto rhs = [&p](double t, std::span<const double> y, std::span<double> d) {
        const auto f = full_field(p, t, State{y[0], y[1], y[2]});
        d[0] = f[0];
        d[1] = f[1];
        d[2] = f[2];
    };
    const std::vector<double> oracle = oracles::rk4_fixed(rhs, 0.0, {0.5, 0.7, 1.0}, kOmega, 100000);
    CHECK(std::abs(mapped.x1 - oracle[0]) < 1e-6);
    CHECK(std::abs(mapped.x2 - oracle[1]) < 1e-6);
    CHECK(std::abs(mapped.x3 - oracle[2]) < 1e-6);
}

TEST_CASE("constant logistic orbit is the carrying capacity") {
    OrbitSolveOptions opts;
    opts.tol = 1e-12;
    const PeriodicOrbit orbit =
        find_orbit(constant_set(), State{0.5, 0.0, 0.0}, OrbitMode::logistic1, opts);
    CHECK(orbit.dimension == 1);
    CHECK(std::abs(orbit.anchor[0] - 1.0) < 1e-10);
    CHECK(orbit.residual < 1e-12);

    // linearization at the orbit gives the multiplier exp(-omega)
    CHECK(orbit.multipliers.size() == 1);
    CHECK(std::abs(orbit.multipliers[0].real() - std::exp(-kOmega)) < 1e-9);
    CHECK(std::abs(orbit.multipliers[0].imag()) < 1e-12);
}

TEST_CASE("full-system orbit of the first experiment") {
    const ScenarioConfig fig1 = preset("fig1");
    const CoefficientSet& p = fig1.coefficients;
    const State guess = default_guess(p, OrbitMode::full, fig1.initial);
    const PeriodicOrbit orbit = find_orbit(p, guess, OrbitMode::full);

    CHECK(orbit.dimension == 3);
    CHECK(orbit.residual < 1e-9);
    for (double v : orbit.anchor) CHECK(v > 0.0);
    REQUIRE(orbit.multipliers.size() == 3);
    for (const auto& m : orbit.multipliers) CHECK(std::abs(m) < 1.0);

    // fixed-point property straight from the period map
    const auto image = poincare(p, OrbitMode::full, orbit.anchor,
                                OrbitSolveOptions{}.integrator);
    double res = 0.0;
    for (int i = 0; i < 3; ++i) res = std::max(res, std::abs(image[i] - orbit.anchor[i]));
    CHECK(res < 1e-9);

    // the one-period trajectory closes up
    const auto end = orbit.trajectory.state_at(orbit.trajectory.steps());
    for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(end[i] - orbit.anchor[i]) <= 10.0 * std::max(orbit.residual, 1e-13));
    }
}

TEST_CASE("boundary orbit of the second experiment") {
    const ScenarioConfig fig2 = preset("fig2");
    const CoefficientSet& p = fig2.coefficients;
    const State guess = default_guess(p, OrbitMode::boundary, State{0.5, 0.7, 0.0});
    const PeriodicOrbit orbit = find_orbit(p, guess, OrbitMode::boundary);

    CHECK(orbit.dimension == 2);
    CHECK(orbit.residual < 1e-9);
    CHECK(orbit.anchor[0] > 0.0);
    CHECK(orbit.anchor[1] > 0.0);
    for (const auto& m : orbit.multipliers) CHECK(std::abs(m) < 1.0);

    // embedded in three dimensions the orbit is still attracting
    const Monodromy emb = embedded_monodromy(p, orbit);
    REQUIRE(emb.multipliers.size() == 3);
    for (const auto& m : emb.multipliers) CHECK(std::abs(m) < 1.0);

    const State full = orbit.full_state_at(0.123);
    CHECK(full.x3 == 0.0);
}

TEST_CASE("re-anchoring the orbit keeps it periodic") {
    const ScenarioConfig fig1 = preset("fig1");
    const CoefficientSet& p = fig1.coefficients;
    const OrbitSolveOptions opts;
    const PeriodicOrbit orbit =
        find_orbit(p, default_guess(p, OrbitMode::full, fig1.initial), OrbitMode::full, opts);

    for (double frac : {0.21, 0.5, 0.83}) {
        const double t0 = frac * orbit.omega;
        const std::vector<double> s = orbit.state_at(t0);
        const std::vector<double> back = flow(full_ode(p), t0, s, orbit.omega, opts.integrator);
        double maxabs = 0.0;
        for (double v : s) maxabs = std::max(maxabs, std::abs(v));
        // the residual bound saturates at the integrator's own cross-path
        // noise once Newton converges below it
        const double floor = 10.0 * (opts.integrator.rtol * maxabs + opts.integrator.atol);
        for (int i = 0; i < 3; ++i) {
            CHECK(std::abs(back[i] - s[i]) <= std::max(10.0 * orbit.residual, floor));
        }
    }
}

TEST_CASE("guess zero-pattern is enforced") {
    const ScenarioConfig fig1 = preset("fig1");
    const CoefficientSet& p = fig1.coefficients;
    CHECK_THROWS_AS(find_orbit(p, State{1.0, 1.0, 1.0}, OrbitMode::boundary),
                    std::invalid_argument);
    CHECK_THROWS_AS(find_orbit(p, State{1.0, 1.0, 0.0}, OrbitMode::full), std::invalid_argument);
    CHECK_THROWS_AS(find_orbit(p, State{1.0, 0.5, 0.0}, OrbitMode::logistic1),
                    std::invalid_argument);
    CHECK_THROWS_AS(find_orbit(p, State{0.0, 0.5, 0.1}, OrbitMode::logistic2),
                    std::invalid_argument);
}

TEST_CASE("solver failure reports the best iterate") {
    const ScenarioConfig fig1 = preset("fig1");
    OrbitSolveOptions opts;
    opts.max_newton = 1;
    opts.max_map_iterations = 1;
    try {
        find_orbit(fig1.coefficients, State{3.0, 3.0, 3.0}, OrbitMode::full, opts);
        FAIL("expected OrbitSolveError");
    } catch (const OrbitSolveError& err) {
        CHECK(err.best_iterate().size() == 3);
        CHECK(err.residual() > 0.0);
        CHECK(err.residual() < 1e9);
    }
}

TEST_CASE("monodromy requires a converged orbit") {
    const ScenarioConfig fig1 = preset("fig1");
    const CoefficientSet& p = fig1.coefficients;
    PeriodicOrbit orbit =
        find_orbit(p, default_guess(p, OrbitMode::full, fig1.initial), OrbitMode::full);
    orbit.residual = 1e-3;
    CHECK_THROWS_AS(monodromy(p, orbit), std::invalid_argument);
}

TEST_CASE("Liouville identity: determinant equals the exponential of the trace integral") {
    const ScenarioConfig fig1 = preset("fig1");
    const ScenarioConfig fig2 = preset("fig2");

    const PeriodicOrbit full = find_orbit(
        fig1.coefficients, default_guess(fig1.coefficients, OrbitMode::full, fig1.initial),
        OrbitMode::full);
    const Monodromy m_full = monodromy(fig1.coefficients, full);
    CHECK(std::abs(m_full.matrix.determinant() -
                   std::exp(liouville_exponent(fig1.coefficients, full))) < 1e-6);

    const PeriodicOrbit bnd = find_orbit(
        fig2.coefficients, default_guess(fig2.coefficients, OrbitMode::boundary, State{0.5, 0.7, 0.0}),
        OrbitMode::boundary);
    const Monodromy m_bnd = monodromy(fig2.coefficients, bnd);
    CHECK(std::abs(m_bnd.matrix.determinant() -
                   std::exp(liouville_exponent(fig2.coefficients, bnd))) < 1e-6);

    const PeriodicOrbit lo = find_orbit(fig1.coefficients, State{1.3, 0.0, 0.0},
                                        OrbitMode::logistic1);
    const Monodromy m_lo = monodromy(fig1.coefficients, lo);
    CHECK(std::abs(m_lo.matrix.determinant() -
                   std::exp(liouville_exponent(fig1.coefficients, lo))) < 1e-6);
}

TEST_CASE("closed-form logistic solution") {
    SUBCASE("constants collapse to a/b") {
        const SampledPeriodicFunction x = logistic_closed_form(constant(2.0), constant(4.0), 64);
        for (int i = 0; i < 32; ++i) {
            CHECK(std::abs(x(kOmega * i / 32.0) - 0.5) < 1e-10);
        }
    }

    SUBCASE("satisfies the logistic equation") {
        const PeriodicCoefficient a(kOmega, 3.0, {{1, 1.0, 0.0}}, "a");
        const PeriodicCoefficient b(kOmega, 2.0, {{1, 0.0, 1.0}}, "b");
        const SampledPeriodicFunction x = logistic_closed_form(a, b);
        double worst = 0.0;
        for (int i = 0; i < 64; ++i) {
            const double t = kOmega * i / 64.0;
            worst = std::max(worst, std::abs(x.derivative(t) - x(t) * (a(t) - b(t) * x(t))));
        }
        CHECK(worst < 1e-8);
        CHECK(check_positive(CoefficientExpr(x)).positive);
        CHECK(std::abs(x(0.0) - x(kOmega)) < 1e-12);
    }

    SUBCASE("agrees with the period-map solve") {
        const PeriodicCoefficient a(kOmega, 3.0, {{1, 1.0, 0.0}}, "a");
        const PeriodicCoefficient b(kOmega, 2.0, {{1, 0.0, 1.0}}, "b");
        const SampledPeriodicFunction x = logistic_closed_form(a, b);

        const PeriodicCoefficient one = constant(1.0);
        const CoefficientSet set(a, one, one, b, one, one, one, one, one, one, one, one, one, one);
        const PeriodicOrbit orbit = find_orbit(set, State{x(0.0), 0.0, 0.0}, OrbitMode::logistic1);
        double sup = 0.0;
        for (int i = 0; i < 256; ++i) {
            const double t = kOmega * i / 256.0;
            sup = std::max(sup, std::abs(x(t) - orbit.state_at(t)[0]));
        }
        CHECK(sup < 1e-8);
    }

    SUBCASE("rejects nonpositive mean growth") {
        CHECK_THROWS_AS(logistic_closed_form(PeriodicCoefficient(kOmega, -0.5), constant(1.0)),
                        std::invalid_argument);
        CHECK_THROWS_AS(logistic_closed_form(constant(1.0),
                                             PeriodicCoefficient(2.0 * kOmega, 1.0)),
                        std::invalid_argument);
    }
}
