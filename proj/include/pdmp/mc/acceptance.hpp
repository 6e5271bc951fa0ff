#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <vector>

#include "pdmp/engine.hpp"
#include "pdmp/errors.hpp"
#include "pdmp/mc/reports.hpp"
#include "pdmp/mc/runner.hpp"
#include "pdmp/stats/accumulators.hpp"

namespace pdmp::mc {

namespace detail {

struct AcceptanceTrialRow {
    double ratio = std::numeric_limits<double>::quiet_NaN();
    double tau = std::numeric_limits<double>::quiet_NaN();
    double proposed = 0.0;
    double accepted = 0.0;
    double max_gap = 0.0;
};

} // namespace detail

/// Estimate the rate of acceptance of one (model, strategy) pair over
/// independent trials. Trial i runs on rng stream i, so the estimate is
/// reproducible and independent of the thread schedule.
template <PdmpModel M>
AcceptanceReport estimate_acceptance(const M& model, const HybridState<typename M::Mode>& initial,
                                     const BoundStrategy& strategy, double horizon,
                                     std::uint64_t trials, std::uint64_t seed,
                                     unsigned threads = default_thread_count()) {
    using Mode = typename M::Mode;
    const auto t_begin = std::chrono::steady_clock::now();
    std::vector<detail::AcceptanceTrialRow> rows(trials);
    run_trials(trials, threads, [&](std::uint64_t trial) {
        SimulationConfig<Mode> cfg;
        cfg.horizon = horizon;
        cfg.strategy = strategy;
        cfg.initial_state = initial;
        cfg.seed = seed;
        cfg.stream_id = trial;
        cfg.record_tau = false;
        detail::AcceptanceTrialRow& row = rows[trial];
        const ThinningStats stats = simulate_path_core(
            model, cfg,
            [&row](const HybridState<Mode>& from, double t_end, bool jumped) {
                if (jumped) row.max_gap = std::max(row.max_gap, t_end - from.time);
                return true;
            },
            nullptr, nullptr);
        if (const auto r = stats.acceptance_ratio()) row.ratio = *r;
        if (const auto t = stats.mean_tau()) row.tau = *t;
        row.proposed = static_cast<double>(stats.total_proposed);
        row.accepted = static_cast<double>(stats.total_accepted);
    });

    stats::RunningStat ratio_stat;
    stats::RunningStat tau_stat;
    stats::RunningStat proposed_stat;
    stats::RunningStat accepted_stat;
    double max_gap = 0.0;
    for (const auto& row : rows) {
        if (!std::isnan(row.ratio)) ratio_stat.add(row.ratio);
        if (!std::isnan(row.tau)) tau_stat.add(row.tau);
        proposed_stat.add(row.proposed);
        accepted_stat.add(row.accepted);
        max_gap = std::max(max_gap, row.max_gap);
    }
    if (ratio_stat.count() == 0) {
        throw DegenerateReportError("no trial proposed a single point; acceptance is undefined");
    }

    AcceptanceReport report;
    report.strategy = strategy.label();
    report.epsilon = strategy.epsilon;
    report.trials = trials;
    report.trials_with_proposals = ratio_stat.count();
    report.mean_acceptance = ratio_stat.mean();
    report.std_error = ratio_stat.std_error();
    report.mean_tau = tau_stat.count() > 0 ? tau_stat.mean() : 0.0;
    report.tau_std_error = tau_stat.std_error();
    report.mean_proposed = proposed_stat.mean();
    report.mean_accepted = accepted_stat.mean();
    report.max_interjump = max_gap;
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin).count();
    return report;
}

/// One acceptance report per partition width, for the epsilon-sweep figures.
template <PdmpModel M>
std::vector<AcceptanceReport> sweep_epsilon(const M& model,
                                            const HybridState<typename M::Mode>& initial,
                                            BoundKind kind, const std::vector<double>& epsilons,
                                            double horizon, std::uint64_t trials,
                                            std::uint64_t seed,
                                            unsigned threads = default_thread_count()) {
    if (epsilons.empty()) throw std::invalid_argument("epsilon sweep needs at least one value");
    if (kind != BoundKind::OptimalP && kind != BoundKind::OptimalQ) {
        throw std::invalid_argument("epsilon sweep applies to the partitioned bounds only");
    }
    std::vector<AcceptanceReport> out;
    out.reserve(epsilons.size());
    for (const double eps : epsilons) {
        if (!(eps > 0.0)) throw std::invalid_argument("epsilon sweep needs positive widths");
        const BoundStrategy strategy = kind == BoundKind::OptimalP
                                           ? BoundStrategy::optimal_p(eps)
                                           : BoundStrategy::optimal_q(eps);
        out.push_back(estimate_acceptance(model, initial, strategy, horizon, trials, seed, threads));
    }
    return out;
}

} // namespace pdmp::mc
