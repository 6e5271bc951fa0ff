#include <doctest.h>

#include <cmath>

#include "pdmp/flow.hpp"
#include "pdmp/numeric/quadrature.hpp"
#include "pdmp/rng.hpp"
#include "support/oracles.hpp"

using namespace pdmp;

TEST_CASE("zero drive with zero start is a fixed point") {
    const FlowSegment seg{0.0, 0.0, 1.0, 0.0};
    for (const double t : {0.0, 0.5, 3.0, 50.0}) {
        CHECK(evaluate_flow(seg, t, {}) == 0.0);
    }
}

TEST_CASE("the equilibrium drive/decay is invariant") {
    const FlowSegment seg{2.0, 8.0 / 2.5, 2.5, 8.0};
    for (const double t : {2.0, 2.1, 4.0, 30.0}) {
        CHECK(evaluate_flow(seg, t, {}) == doctest::Approx(8.0 / 2.5).epsilon(1e-14));
    }
}

TEST_CASE("relaxation from zero matches the RK4 oracle") {
    // dV/dt = -0.5 V + 1, V(2) = 2 (1 - e^{-1})
    const FlowSegment seg{0.0, 0.0, 0.5, 1.0};
    const double got = evaluate_flow(seg, 2.0, {});
    const double oracle = testsupport::linear_ode_rk4(0.5, 1.0, 0.0, 0.0, 2.0, {});
    CHECK(got == doctest::Approx(oracle).epsilon(1e-10));
    CHECK(got == doctest::Approx(1.2642411176571153).epsilon(1e-12));
}

TEST_CASE("pulse integral closed form") {
    const PulseCurrent pulse{30.0, 1.0, 2.0};
    SUBCASE("zero amplitude") {
        CHECK(pulse_integral(1.0, 0.0, 3.0, {0.0, 1.0, 2.0}) == 0.0);
    }
    SUBCASE("disjoint support") {
        CHECK(pulse_integral(1.0, 0.0, 0.5, pulse) == 0.0);
        CHECK(pulse_integral(1.0, 5.0, 9.0, pulse) == 0.0);
    }
    SUBCASE("overlap matches quadrature") {
        const double got = pulse_integral(1.0, 0.0, 3.0, pulse);
        const double oracle = numeric::adaptive_simpson(
            [&](double s) { return std::exp(s) * (s >= 1.0 && s <= 2.0 ? 30.0 : 0.0); }, 0.0, 3.0,
            1e-12);
        CHECK(got == doctest::Approx(oracle).epsilon(1e-9));
        CHECK(got == doctest::Approx(140.12322811414816).epsilon(1e-12));
    }
    SUBCASE("partial overlap from inside the pulse") {
        const double got = pulse_integral(0.7, 1.4, 1.9, pulse);
        const double oracle = numeric::adaptive_simpson(
            [&](double s) { return std::exp(0.7 * (s - 1.4)) * 30.0; }, 1.4, 1.9, 1e-12);
        CHECK(got == doctest::Approx(oracle).epsilon(1e-10));
    }
}

TEST_CASE("flow is continuous at the segment start") {
    // |V(t0+d) - V0| ~ |V'| d, so the 1e-9 budget needs moderate dynamics.
    const double volts[] = {0.0, -7.5, 25.0};
    for (const double v : volts) {
        const FlowSegment seg{1.0, v, 0.3, 1.0};
        const double delta = 1e-12 * (1.0 + std::abs(v));
        CHECK(std::abs(evaluate_flow(seg, 1.0 + delta, {}) - v) < 1e-9);
    }
    // Larger states: continuity scales with the local slope.
    const FlowSegment seg{1.0, 110.0, 3.0, 11.0};
    const double slope = std::abs(-3.0 * 110.0 + 11.0);
    const double delta = 1e-12 * (1.0 + 110.0);
    CHECK(std::abs(evaluate_flow(seg, 1.0 + delta, {}) - 110.0) < 1.05 * slope * delta + 1e-12);
}

TEST_CASE("closed form matches adaptive RK4 on random segments") {
    RngStream rng(31337, 0);
    for (int trial = 0; trial < 100; ++trial) {
        const double a = 0.05 + 5.0 * rng.next_uniform();
        const double b = -10.0 + 20.0 * rng.next_uniform();
        const double v0 = -20.0 + 140.0 * rng.next_uniform();
        const double t0 = 3.0 * rng.next_uniform();
        const double dt = 0.01 + 3.0 * rng.next_uniform();
        PulseCurrent pulse;
        if (trial % 2 == 0) {
            const double on = 4.0 * rng.next_uniform();
            pulse = {40.0 * rng.next_uniform(), on, on + 2.0 * rng.next_uniform()};
        }
        const FlowSegment seg{t0, v0, a, b};
        const double got = evaluate_flow(seg, t0 + dt, pulse);
        const double oracle = testsupport::linear_ode_rk4(a, b, v0, t0, t0 + dt, pulse);
        REQUIRE(got == doctest::Approx(oracle).epsilon(1e-8));
    }
}

TEST_CASE("stiff segments do not overflow") {
    // decay * dt ~ 1500: the decayed evaluation must stay finite.
    const FlowSegment seg{0.0, 40.0, 156.3, 30.0};
    const double v = evaluate_flow(seg, 10.0, {30.0, 1.0, 2.0});
    CHECK(std::isfinite(v));
    CHECK(v == doctest::Approx(30.0 / 156.3).epsilon(1e-9)); // settled at equilibrium
}

TEST_CASE("non-finite inputs surface as errors, never as silent NaN") {
    const FlowSegment seg{0.0, std::numeric_limits<double>::infinity(), 1.0, 0.0};
    CHECK_THROWS_AS(evaluate_flow(seg, 1.0, {}), NumericError);
}
