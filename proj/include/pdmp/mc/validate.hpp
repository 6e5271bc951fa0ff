#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "pdmp/engine.hpp"
#include "pdmp/mc/runner.hpp"
#include "pdmp/models/synthetic.hpp"
#include "pdmp/numeric/quadrature.hpp"
#include "pdmp/stats/accumulators.hpp"
#include "pdmp/stats/tests.hpp"

namespace pdmp::mc {

/// Distributional check on the rejected points of a constant-rate model under
/// an inflated constant envelope: they form a Poisson process of rate
/// (envelope - rate), with independent counts on disjoint windows.
struct CoxValidation {
    double expected_rejected_mean = 0.0;
    double observed_rejected_mean = 0.0;
    double chi_square_p = 0.0;      // rejected count vs the Poisson law
    double window_covariance = 0.0; // counts on [0, T/2) and [T/2, T)
    double covariance_limit = 0.0;  // three sigma of the covariance estimator

    bool pass(double alpha = 0.01) const {
        return chi_square_p > alpha && std::abs(window_covariance) < covariance_limit;
    }
};

inline CoxValidation validate_cox(double rate, double bound_factor, double horizon,
                                  std::uint64_t trials, std::uint64_t seed,
                                  unsigned threads = default_thread_count()) {
    const models::ConstantRateModel model(rate, bound_factor);
    struct Row {
        double rejected = 0.0;
        double first_half = 0.0;
        double second_half = 0.0;
    };
    std::vector<Row> rows(trials);
    run_trials(trials, threads, [&](std::uint64_t trial) {
        SimulationConfig<int> cfg;
        cfg.horizon = horizon;
        cfg.strategy = BoundStrategy::global();
        cfg.initial_state = {0, 0.0, 0.0};
        cfg.seed = seed;
        cfg.stream_id = trial;
        cfg.record_candidates = true;
        cfg.record_tau = false;
        const auto path = simulate_path(model, cfg);
        const std::vector<double> rejected =
            collect_rejected(path.candidate_times, path.trajectory.jump_times);
        Row& row = rows[trial];
        row.rejected = static_cast<double>(rejected.size());
        const double mid = horizon / 2.0;
        for (const double t : rejected) {
            (t < mid ? row.first_half : row.second_half) += 1.0;
        }
    });

    const double mean_rejected = (bound_factor - 1.0) * rate * horizon;
    std::vector<std::uint64_t> hist(static_cast<std::size_t>(mean_rejected + 12.0 * std::sqrt(mean_rejected)) + 2, 0);
    stats::RunningStat first_stat;
    stats::RunningStat second_stat;
    stats::RunningStat rejected_stat;
    double cross_sum = 0.0;
    for (const auto& row : rows) {
        const auto idx = std::min(hist.size() - 1, static_cast<std::size_t>(row.rejected));
        ++hist[idx];
        first_stat.add(row.first_half);
        second_stat.add(row.second_half);
        rejected_stat.add(row.rejected);
        cross_sum += row.first_half * row.second_half;
    }
    const double n = static_cast<double>(trials);
    const double covariance = cross_sum / n - first_stat.mean() * second_stat.mean();
    // Var of the empirical covariance of independent Poissons is about
    // (Var X * Var Y) / n.
    const double cov_sigma = std::sqrt(first_stat.variance() * second_stat.variance() / n);

    CoxValidation out;
    out.expected_rejected_mean = mean_rejected;
    out.observed_rejected_mean = rejected_stat.mean();
    if (mean_rejected == 0.0) {
        // Tight envelope: the rejected process is empty almost surely.
        out.chi_square_p = rejected_stat.mean() == 0.0 ? 1.0 : 0.0;
    } else {
        // Last histogram cell holds every overflow count, so its probability
        // is the matching Poisson tail.
        std::vector<double> probs = stats::poisson_pmf(mean_rejected, hist.size() - 1);
        const double head = std::accumulate(probs.begin(), probs.end() - 1, 0.0);
        probs.back() = std::max(0.0, 1.0 - head);
        out.chi_square_p = stats::chi_square_gof(hist, probs).p_value;
    }
    out.window_covariance = covariance;
    out.covariance_limit = 3.0 * cov_sigma;
    return out;
}

/// Thinning of a bounded inhomogeneous Poisson process, checked against the
/// closed-form acceptance rate (integral ratio) and, at a shorter horizon,
/// the conditional binomial law of the accepted count.
struct PoissonThinningValidation {
    double expected_acceptance = 0.0; // integral of rate over integral of bound
    double observed_acceptance = 0.0;
    double acceptance_abs_error = 0.0;
    double binomial_horizon = 0.0;
    std::vector<double> binomial_p_values; // conditional on 3..8 proposals

    bool pass(double tolerance = 0.01, double alpha = 0.01) const {
        if (acceptance_abs_error >= tolerance) return false;
        return std::all_of(binomial_p_values.begin(), binomial_p_values.end(),
                           [alpha](double p) { return p > alpha; });
    }
};

inline PoissonThinningValidation validate_poisson_thinning(
    double horizon, double binomial_horizon, std::uint64_t trials, std::uint64_t seed,
    unsigned threads = default_thread_count()) {
    const auto model = models::make_sin_squared_model();
    const double bound = *model.global_rate_bound();
    const auto rate = [](double t) { return 1.0 + std::sin(t) * std::sin(t); };

    PoissonThinningValidation out;
    out.binomial_horizon = binomial_horizon;
    out.expected_acceptance =
        numeric::adaptive_simpson(rate, 0.0, horizon) / (bound * horizon);

    std::vector<double> ratios(trials, std::numeric_limits<double>::quiet_NaN());
    run_trials(trials, threads, [&](std::uint64_t trial) {
        SimulationConfig<int> cfg;
        cfg.horizon = horizon;
        cfg.strategy = BoundStrategy::global();
        cfg.initial_state = {0, 0.0, 0.0};
        cfg.seed = seed;
        cfg.stream_id = trial;
        cfg.record_tau = false;
        const ThinningStats stats = simulate_path_core(
            model, cfg, [](const HybridState<int>&, double, bool) { return true; }, nullptr,
            nullptr);
        if (const auto r = stats.acceptance_ratio()) ratios[trial] = *r;
    });
    stats::RunningStat ratio_stat;
    for (const double r : ratios) {
        if (!std::isnan(r)) ratio_stat.add(r);
    }
    out.observed_acceptance = ratio_stat.mean();
    out.acceptance_abs_error = std::abs(out.observed_acceptance - out.expected_acceptance);

    // Conditional binomial law at a horizon where small proposal counts have
    // real mass. Proposal streams are fresh (offset the stream ids).
    const double p_accept =
        numeric::adaptive_simpson(rate, 0.0, binomial_horizon) / (bound * binomial_horizon);
    struct Pair {
        std::uint32_t proposed = 0;
        std::uint32_t accepted = 0;
    };
    std::vector<Pair> pairs(trials);
    run_trials(trials, threads, [&](std::uint64_t trial) {
        SimulationConfig<int> cfg;
        cfg.horizon = binomial_horizon;
        cfg.strategy = BoundStrategy::global();
        cfg.initial_state = {0, 0.0, 0.0};
        cfg.seed = seed;
        cfg.stream_id = trials + trial;
        cfg.record_tau = false;
        const ThinningStats stats = simulate_path_core(
            model, cfg, [](const HybridState<int>&, double, bool) { return true; }, nullptr,
            nullptr);
        pairs[trial] = {static_cast<std::uint32_t>(stats.total_proposed),
                        static_cast<std::uint32_t>(stats.total_accepted)};
    });
    for (int n = 3; n <= 8; ++n) {
        std::vector<std::uint64_t> counts(static_cast<std::size_t>(n) + 1, 0);
        for (const auto& pr : pairs) {
            if (pr.proposed == static_cast<std::uint32_t>(n)) ++counts[pr.accepted];
        }
        out.binomial_p_values.push_back(
            stats::chi_square_gof(counts, stats::binomial_pmf(n, p_accept)).p_value);
    }
    return out;
}

} // namespace pdmp::mc
