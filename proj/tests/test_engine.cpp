#include <doctest.h>

#include <cmath>
#include <vector>

#include "pdmp/engine.hpp"
#include "pdmp/models/synthetic.hpp"
#include "pdmp/stats/accumulators.hpp"
#include "pdmp/stats/tests.hpp"

using namespace pdmp;

namespace {

SimulationConfig<int> base_config(double horizon, std::uint64_t stream) {
    SimulationConfig<int> cfg;
    cfg.horizon = horizon;
    cfg.strategy = BoundStrategy::global();
    cfg.initial_state = {0, 0.0, 0.0};
    cfg.seed = 77;
    cfg.stream_id = stream;
    return cfg;
}

} // namespace

TEST_CASE("a tight constant envelope accepts every proposal") {
    const models::ConstantRateModel model(3.0); // envelope factor 1: exact
    std::vector<double> gaps;
    for (std::uint64_t trial = 0; trial < 20'000; ++trial) {
        RngStream rng(11, trial);
        RateEnvelope env;
        build_envelope(model, {0, 0.0, 0.0}, BoundStrategy::global(), 1e9, env);
        const NextJump nj = next_jump(model, {0, 0.0, 0.0}, env, rng, 1e9);
        REQUIRE(nj.proposals == 1);
        REQUIRE(nj.time.has_value());
        gaps.push_back(*nj.time);
    }
    const auto ks = stats::ks_test(gaps, [](double t) { return 1.0 - std::exp(-3.0 * t); });
    CHECK(ks.p_value > 0.01);
}

TEST_CASE("an envelope at twice the rate proposes a geometric number of points with mean 2") {
    const models::ConstantRateModel model(1.0, 2.0);
    stats::RunningStat tau;
    for (std::uint64_t trial = 0; trial < 100'000; ++trial) {
        RngStream rng(13, trial);
        RateEnvelope env;
        build_envelope(model, {0, 0.0, 0.0}, BoundStrategy::global(), 1e9, env);
        tau.add(static_cast<double>(next_jump(model, {0, 0.0, 0.0}, env, rng, 1e9).proposals));
    }
    CHECK(std::abs(tau.mean() - 2.0) < 0.02);
}

TEST_CASE("accepted first jump of a linearly growing rate has the closed-form law") {
    // rate(t) = t enveloped by the windowed partition; F(t) = 1 - e^{-t^2/2}.
    const auto model = models::make_linear_rate_model();
    std::vector<double> samples;
    samples.reserve(100'000);
    for (std::uint64_t trial = 0; trial < 100'000; ++trial) {
        RngStream rng(17, trial);
        RateEnvelope env;
        build_envelope(model, {0, 0.0, 0.0}, BoundStrategy::optimal_p(0.1), 1e9, env);
        const NextJump nj = next_jump(model, {0, 0.0, 0.0}, env, rng, 1e9);
        REQUIRE(nj.time.has_value());
        samples.push_back(*nj.time);
    }
    const auto ks =
        stats::ks_test(samples, [](double t) { return -std::expm1(-0.5 * t * t); });
    CHECK(ks.p_value > 0.01);
}

TEST_CASE("flip-flop jump counts over a window are Poisson") {
    const models::ConstantRateModel model(1.0);
    constexpr double horizon = 10.0;
    constexpr std::uint64_t trials = 100'000;
    std::vector<std::uint64_t> hist(40, 0);
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        auto cfg = base_config(horizon, trial);
        cfg.record_tau = false;
        const ThinningStats st = simulate_path_core(
            model, cfg, [](const HybridState<int>&, double, bool) { return true; }, nullptr,
            nullptr);
        ++hist[std::min<std::uint64_t>(st.total_accepted, hist.size() - 1)];
    }
    std::vector<double> probs = stats::poisson_pmf(10.0, hist.size() - 1);
    double head = 0.0;
    for (std::size_t i = 0; i + 1 < probs.size(); ++i) head += probs[i];
    probs.back() = 1.0 - head;
    CHECK(stats::chi_square_gof(hist, probs).p_value > 0.01);
}

TEST_CASE("same seed reproduces the path bit for bit") {
    const models::ConstantRateModel model(2.0, 1.5);
    auto cfg = base_config(25.0, 3);
    cfg.record_candidates = true;
    const auto a = simulate_path(model, cfg);
    const auto b = simulate_path(model, cfg);
    REQUIRE(a.trajectory.jump_times.size() == b.trajectory.jump_times.size());
    for (std::size_t i = 0; i < a.trajectory.jump_times.size(); ++i) {
        REQUIRE(a.trajectory.jump_times[i] == b.trajectory.jump_times[i]);
        REQUIRE(a.trajectory.post_jump_states[i].mode == b.trajectory.post_jump_states[i].mode);
    }
    REQUIRE(a.candidate_times == b.candidate_times);
    CHECK(a.trajectory.well_formed());
    CHECK(b.trajectory.well_formed());
}

TEST_CASE("stats bookkeeping ties out") {
    const models::ConstantRateModel model(4.0, 3.0);
    auto cfg = base_config(8.0, 9);
    const auto path = simulate_path(model, cfg);
    const ThinningStats& st = path.stats;
    CHECK(st.total_accepted <= st.total_proposed);
    CHECK(st.total_accepted == path.trajectory.jump_count());
    std::uint64_t tau_sum = 0;
    for (const auto tau : st.per_interjump_proposals) {
        CHECK(tau >= 1);
        tau_sum += tau;
    }
    CHECK(tau_sum + st.residual_proposals == st.total_proposed);
    CHECK(st.per_interjump_proposals.size() == st.total_accepted);
}

TEST_CASE("a horizon before the first candidate leaves only the initial segment") {
    const models::ConstantRateModel model(1e-9);
    auto cfg = base_config(1.0, 0);
    const auto path = simulate_path(model, cfg);
    CHECK(path.trajectory.jump_times.empty());
    CHECK(path.trajectory.segments.empty());
    CHECK(path.trajectory.well_formed());
    CHECK(path.stats.total_accepted == 0);
    if (const auto ratio = path.stats.acceptance_ratio()) CHECK(*ratio == 0.0);
}

TEST_CASE("the proposal cap converts a runaway interval into a diagnostic") {
    const models::ConstantRateModel model(1e-6, 1e9); // envelope 1000, rate 1e-6
    auto cfg = base_config(1e6, 1);
    cfg.proposal_cap = 2'000;
    CHECK_THROWS_AS((void)simulate_path(model, cfg), ProposalCapError);
    try {
        (void)simulate_path(model, cfg);
    } catch (const ProposalCapError& e) {
        CHECK(e.proposed_so_far >= 2'000);
    }
}

TEST_CASE("collect_rejected is the order-preserving complement") {
    SUBCASE("hand-rolled") {
        const std::vector<double> cand{0.5, 1.0, 1.5, 2.0, 3.0};
        const std::vector<double> acc{1.0, 3.0};
        CHECK(collect_rejected(cand, acc) == std::vector<double>{0.5, 1.5, 2.0});
        CHECK(collect_rejected(cand, cand).empty());
    }
    SUBCASE("tight envelope rejects nothing") {
        const models::ConstantRateModel model(2.0);
        auto cfg = base_config(50.0, 2);
        cfg.record_candidates = true;
        const auto path = simulate_path(model, cfg);
        CHECK(collect_rejected(path.candidate_times, path.trajectory.jump_times).empty());
    }
    SUBCASE("loose envelope partitions candidates") {
        const models::ConstantRateModel model(1.0, 3.0);
        auto cfg = base_config(50.0, 4);
        cfg.record_candidates = true;
        const auto path = simulate_path(model, cfg);
        const auto rejected = collect_rejected(path.candidate_times, path.trajectory.jump_times);
        CHECK(rejected.size() + path.trajectory.jump_times.size() == path.candidate_times.size());
    }
}

TEST_CASE("a zero tail level surfaces as an infinite-horizon error") {
    // Zero rate: every candidate is rejected, so the head's finite mass runs
    // out and no further candidate time exists.
    const models::ConstantRateModel model(0.0);
    RateEnvelope env;
    env.reset_two_piece(0.0, 1.0, 0.5, 0.0);
    RngStream rng(21, 0);
    CHECK_THROWS_AS((void)next_jump(model, {0, 0.0, 0.0}, env, rng, 100.0, 100000),
                    InfiniteHorizonError);
}

TEST_CASE("config validation rejects nonsense") {
    const models::ConstantRateModel model(1.0);
    auto bad_horizon = base_config(0.0, 0);
    CHECK_THROWS_AS((void)simulate_path(model, bad_horizon), std::invalid_argument);
    auto bad_cap = base_config(1.0, 0);
    bad_cap.proposal_cap = 10;
    CHECK_THROWS_AS((void)simulate_path(model, bad_cap), std::invalid_argument);
}
