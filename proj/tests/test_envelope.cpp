#include <doctest.h>

#include <cmath>
#include <vector>

#include "pdmp/envelope.hpp"
#include "pdmp/hh/subunit.hpp"
#include "pdmp/models/synthetic.hpp"
#include "pdmp/rng.hpp"
#include "support/oracles.hpp"

using namespace pdmp;

namespace {

const models::ConstantRateModel kConstModel(2.5);
const HybridState<int> kConstState{0, 0.0, 1.0};

} // namespace

TEST_CASE("constant-rate model: every strategy collapses to the same level") {
    RateEnvelope env;
    for (const auto& strategy :
         {BoundStrategy::global(), BoundStrategy::local(), BoundStrategy::optimal_p(0.3),
          BoundStrategy::optimal_q(0.3), BoundStrategy::optimal_q_adaptive()}) {
        build_envelope(kConstModel, kConstState, strategy, 100.0, env);
        for (const double t : {1.0, 1.4, 2.9, 17.0}) {
            CHECK(env.value(t) == 2.5);
        }
    }
}

TEST_CASE("global bound for the unit HH model matches the rate functions at the sodium potential") {
    // 3 a_m(115) + b_h(115) + 4 a_n(115), written out against the raw
    // formulas rather than the library's gate_rates.
    const double am = (2.5 - 0.1 * 115.0) / std::expm1(2.5 - 0.1 * 115.0);
    const double bh = 1.0 / (std::exp(3.0 - 0.1 * 115.0) + 1.0);
    const double an = (0.1 - 0.01 * 115.0) / std::expm1(1.0 - 0.1 * 115.0);
    const double expected = 3.0 * am + bh + 4.0 * an;
    CHECK(expected == doctest::Approx(32.2034).epsilon(2e-5));

    const hh::SubunitModel model{hh::HHParams{}};
    REQUIRE(model.global_rate_bound().has_value());
    CHECK(*model.global_rate_bound() == doctest::Approx(expected).epsilon(1e-12));

    RateEnvelope env;
    build_envelope(model, {hh::SubunitModel::all_closed(), 0.0, 0.0}, BoundStrategy::global(),
                   10.0, env);
    CHECK(env.value(0.0) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("integral and inverse are mutual inverses on all shapes") {
    RngStream rng(404, 0);
    RateEnvelope env;

    SUBCASE("single level") {
        env.reset_constant(1.0, 3.25);
        for (int i = 0; i < 100; ++i) {
            const double t = 1.0 + 40.0 * rng.next_uniform();
            CHECK(std::abs(env.inverse(env.integral(t)) - t) < 1e-10 * (1.0 + std::abs(t)));
        }
        CHECK(env.integral(1.0) == 0.0);
        CHECK(env.integral(3.0) == doctest::Approx(2.0 * 3.25).epsilon(1e-15));
        CHECK(env.inverse(6.5) == doctest::Approx(3.0).epsilon(1e-15));
    }

    SUBCASE("two piece, continuity at the branch point") {
        env.reset_two_piece(2.0, 0.5, 4.0, 0.75);
        const double knee_mass = 0.5 * 4.0;
        const double just_below = env.inverse(knee_mass * (1.0 - 1e-13));
        const double just_above = env.inverse(knee_mass * (1.0 + 1e-13));
        CHECK(std::abs(just_above - just_below) < 1e-11);
        CHECK(env.inverse(knee_mass + 0.75 * 1.25) == doctest::Approx(2.0 + 0.5 + 1.25).epsilon(1e-12));
        for (int i = 0; i < 100; ++i) {
            const double t = 2.0 + 5.0 * rng.next_uniform();
            CHECK(std::abs(env.inverse(env.integral(t)) - t) < 1e-10 * (1.0 + t));
        }
    }

    SUBCASE("lazy partition, many segments") {
        std::vector<double> levels;
        for (int k = 0; k < 64; ++k) levels.push_back(0.25 + 3.0 * rng.next_uniform());
        env.reset_lazy(0.0, 0.03, [levels](std::size_t k) { return levels[k % levels.size()]; });
        for (int i = 0; i < 1000; ++i) {
            const double t = 1.9 * rng.next_uniform();
            const double t_back = env.inverse(env.integral(t));
            REQUIRE(std::abs(t_back - t) < 1e-10 * (1.0 + t));
        }
        // Independent inverse: bisection on the monotone integral.
        for (int i = 0; i < 50; ++i) {
            const double mass = 4.0 * rng.next_uniform();
            const double via_env = env.inverse(mass);
            const double via_bisect = testsupport::bisect_inverse(
                [&](double t) { return env.integral(t); }, mass, 0.0, 10.0);
            REQUIRE(std::abs(via_env - via_bisect) < 1e-9);
        }
    }
}

TEST_CASE("breakpoints belong to their right segment") {
    RateEnvelope env;
    env.reset_two_piece(0.0, 1.0, 5.0, 1.0);
    CHECK(env.value(0.0) == 5.0);
    CHECK(env.value(1.0) == 1.0); // half-open [0,1): the knee reads the tail
    CHECK(env.value(0.999999) == 5.0);
}

TEST_CASE("unbounded rates reject global and local strategies but accept windowed partitions") {
    const auto model = models::make_linear_rate_model();
    const HybridState<int> x{0, 0.0, 0.0};
    RateEnvelope env;
    CHECK_THROWS_AS(build_envelope(model, x, BoundStrategy::global(), 10.0, env),
                    UnsupportedStrategyError);
    CHECK_THROWS_AS(build_envelope(model, x, BoundStrategy::local(), 10.0, env),
                    UnsupportedStrategyError);
    build_envelope(model, x, BoundStrategy::optimal_p(0.1), 10.0, env);
    CHECK(env.value(3.05) == doctest::Approx(3.1).epsilon(1e-12)); // sup over [3.0, 3.1)
}

TEST_CASE("invalid partition widths are argument errors") {
    RateEnvelope env;
    CHECK_THROWS_AS(build_envelope(kConstModel, kConstState, BoundStrategy::optimal_p(0.0), 1.0, env),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_envelope(kConstModel, kConstState, BoundStrategy::optimal_q(-0.5), 1.0, env),
                    std::invalid_argument);
}

TEST_CASE("inverse beyond a finite-mass envelope raises the infinite-horizon error") {
    RateEnvelope env;
    env.reset_two_piece(0.0, 1.0, 2.0, 0.0); // total mass 2
    CHECK(env.inverse(1.0) == doctest::Approx(0.5));
    CHECK_THROWS_AS(env.inverse(2.5), InfiniteHorizonError);
}

TEST_CASE("adaptive width follows the defining quantile identity") {
    SUBCASE("constant rate") {
        const double eps = adaptive_epsilon(kConstModel, kConstState);
        CHECK(eps == doctest::Approx(-std::log(0.05) / 2.5).epsilon(1e-14));
        CHECK(eps == doctest::Approx(2.9957 / 2.5).epsilon(1e-4));
        // doubling the rate halves the width
        const models::ConstantRateModel faster(5.0);
        CHECK(adaptive_epsilon(faster, kConstState) == doctest::Approx(eps / 2.0).epsilon(1e-14));
    }
    SUBCASE("subunit model at rest") {
        const hh::HHParams p = hh::HHParams::with_channels(30, {30.0, 1.0, 2.0});
        const hh::SubunitModel model(p);
        const HybridState<hh::SubunitMode> x{hh::SubunitModel::all_closed(), 0.0, 0.0};
        const auto vb = model.voltage_bounds(x, Window{});
        const double lower = model.rate_inf_from_bounds(x.mode, vb.low, vb.high);
        const double eps = adaptive_epsilon(model, x);
        REQUIRE(lower > 0.0);
        CHECK(std::exp(-eps * lower) == doctest::Approx(0.05).epsilon(1e-12));
    }
}
