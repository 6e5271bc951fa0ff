#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <vector>

#include "pdmp/engine.hpp"
#include "pdmp/mc/reports.hpp"
#include "pdmp/mc/runner.hpp"
#include "pdmp/stats/accumulators.hpp"

namespace pdmp::mc {

namespace detail {

/// First offset in (0, len] where the flow reaches the threshold, or empty.
/// The flow is monotone between pulse switch points, so each piece needs one
/// endpoint test and, when bracketed, a bisection to 1e-9 ms.
template <typename FlowFn>
std::optional<double> crossing_offset(const FlowFn& flow, double len, double threshold,
                                      double piece_a, double piece_b) {
    double breaks[4] = {0.0, len, len, len};
    int n_breaks = 2;
    if (piece_a > 0.0 && piece_a < len) breaks[n_breaks++] = piece_a;
    if (piece_b > 0.0 && piece_b < len) breaks[n_breaks++] = piece_b;
    std::sort(breaks, breaks + n_breaks);
    for (int i = 0; i + 1 < n_breaks; ++i) {
        double lo = breaks[i];
        double hi = breaks[i + 1];
        if (!(hi > lo)) continue;
        if (flow(hi) < threshold) continue;
        // flow(lo) < threshold here: the segment start was checked by the
        // caller and earlier pieces did not cross.
        while (hi - lo > 1e-9) {
            const double mid = 0.5 * (lo + hi);
            (flow(mid) >= threshold ? hi : lo) = mid;
        }
        return hi;
    }
    return std::nullopt;
}

} // namespace detail

/// First time the voltage reaches `threshold` on [initial.time, horizon],
/// simulated by thinning and resolved inside flow segments. Empty when the
/// path never crosses.
template <PdmpModel M>
std::optional<double> first_passage_time(const M& model,
                                         const SimulationConfig<typename M::Mode>& cfg,
                                         double threshold, const PulseCurrent& pulse) {
    using Mode = typename M::Mode;
    if (cfg.initial_state.voltage >= threshold) return cfg.initial_state.time;
    std::optional<double> crossing;
    simulate_path_core(
        model, cfg,
        [&](const HybridState<Mode>& from, double t_end, bool) {
            const double len = t_end - from.time;
            if (len <= 0.0) return true;
            const auto offset = detail::crossing_offset(
                [&](double s) { return model.flow(from, s); }, len, threshold,
                pulse.t_on - from.time, pulse.t_off - from.time);
            if (offset) {
                crossing = from.time + *offset;
                return false;
            }
            return true;
        },
        nullptr, nullptr);
    if (crossing && *crossing >= cfg.horizon) return std::nullopt;
    return crossing;
}

/// Spike-time statistics over independent trials: fraction of trials that
/// spike before the horizon, and mean/std of the spiking time conditional on
/// spiking (no-spike trials are excluded, not clamped).
template <PdmpModel M>
SpikingReport spiking_experiment(const M& model, const HybridState<typename M::Mode>& initial,
                                 const BoundStrategy& strategy, double threshold, double horizon,
                                 const PulseCurrent& pulse, std::uint64_t trials,
                                 std::uint64_t seed, unsigned threads = default_thread_count()) {
    using Mode = typename M::Mode;
    const auto t_begin = std::chrono::steady_clock::now();
    constexpr double no_spike = -1.0;
    std::vector<double> spike_times(trials, no_spike);
    run_trials(trials, threads, [&](std::uint64_t trial) {
        SimulationConfig<Mode> cfg;
        cfg.horizon = horizon;
        cfg.strategy = strategy;
        cfg.initial_state = initial;
        cfg.seed = seed;
        cfg.stream_id = trial;
        cfg.record_tau = false;
        if (const auto t = first_passage_time(model, cfg, threshold, pulse)) {
            spike_times[trial] = *t;
        }
    });

    stats::RunningStat stat;
    for (const double t : spike_times) {
        if (t != no_spike) stat.add(t);
    }
    SpikingReport report;
    report.trials = trials;
    report.spikes = stat.count();
    report.spike_fraction = static_cast<double>(stat.count()) / static_cast<double>(trials);
    report.mean_spike_time = stat.count() > 0 ? stat.mean() : 0.0;
    report.std_spike_time = stat.std_dev();
    report.mean_std_error = stat.std_error();
    report.threshold = threshold;
    report.horizon = horizon;
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin).count();
    return report;
}

} // namespace pdmp::mc
