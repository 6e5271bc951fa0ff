#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "pdmp/envelope.hpp"
#include "pdmp/errors.hpp"
#include "pdmp/model.hpp"
#include "pdmp/rng.hpp"
#include "pdmp/state.hpp"

namespace pdmp {

/// Proposal/acceptance bookkeeping of one simulated path. A proposal is a
/// candidate time landing inside the horizon; candidates beyond it are never
/// drawn into the counts.
struct ThinningStats {
    std::uint64_t total_proposed = 0;
    std::uint64_t total_accepted = 0;
    /// Rejected proposals after the last accepted jump (the interval the
    /// horizon cut short).
    std::uint64_t residual_proposals = 0;
    /// Proposals needed per accepted jump, accepted point included.
    std::vector<std::uint32_t> per_interjump_proposals;

    /// Per-path acceptance ratio, defined when at least one point was proposed.
    std::optional<double> acceptance_ratio() const {
        if (total_proposed == 0) return std::nullopt;
        return static_cast<double>(total_accepted) / static_cast<double>(total_proposed);
    }

    /// Mean proposals per completed inter-jump interval.
    std::optional<double> mean_tau() const {
        if (total_accepted == 0) return std::nullopt;
        return static_cast<double>(total_proposed - residual_proposals) /
               static_cast<double>(total_accepted);
    }
};

template <typename ModeT>
struct SimulationConfig {
    double horizon = 10.0; // ms
    BoundStrategy strategy{};
    HybridState<ModeT> initial_state{};
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;
    std::uint64_t proposal_cap = 1'000'000; // per inter-jump interval
    bool record_candidates = false;         // keep all proposal times (validation runs)
    bool record_tau = true;                 // keep the per-interval proposal counts
};

template <typename ModeT>
struct PathResult {
    Trajectory<ModeT> trajectory;
    ThinningStats stats;
    std::vector<double> candidate_times; // filled when record_candidates is set
};

struct NextJump {
    std::optional<double> time; // empty when no candidate lands inside the horizon
    std::uint64_t proposals = 0;
};

/// First accepted jump after x, by thinning the envelope's point process:
/// unit-exponential spacings are mapped through the inverse integrated bound
/// and each candidate is kept when u * envelope <= rate (ties accept).
template <PdmpModel M>
NextJump next_jump(const M& model, const HybridState<typename M::Mode>& x, RateEnvelope& env,
                   RngStream& rng, double horizon, std::uint64_t proposal_cap = 1'000'000,
                   std::vector<double>* candidates = nullptr) {
    NextJump out;
    double mass = 0.0;
    for (;;) {
        if (out.proposals >= proposal_cap) {
            throw ProposalCapError("proposal cap exceeded within one inter-jump interval",
                                   out.proposals, 0);
        }
        mass += rng.next_exponential();
        const RateEnvelope::Point cand = env.inverse_point(mass);
        if (cand.time > horizon) return out;
        ++out.proposals;
        if (candidates) candidates->push_back(cand.time);
        const double v = model.flow(x, cand.time - x.time);
        const double lam = model.rate(x.mode, v);
        const double u = rng.next_uniform();
        if (u * cand.level <= lam) {
            out.time = cand.time;
            return out;
        }
    }
}

namespace engine_detail {

template <typename ModeT>
void validate_config(const SimulationConfig<ModeT>& cfg) {
    if (!cfg.initial_state.finite()) throw ModelError("initial state is not finite");
    if (!(cfg.horizon > cfg.initial_state.time)) {
        throw std::invalid_argument("horizon must exceed the initial time");
    }
    if (cfg.proposal_cap < 1'000) {
        throw std::invalid_argument("proposal cap below 1000 is not meaningful");
    }
}

} // namespace engine_detail

/// Core thinning loop. `on_interval(from, t_end, jumped)` fires once per flow
/// interval [from.time, t_end]; returning false stops the simulation early
/// (used by first-passage runs). Statistics and candidates are collected
/// regardless of the observer.
template <PdmpModel M, typename OnInterval>
ThinningStats simulate_path_core(const M& model, const SimulationConfig<typename M::Mode>& cfg,
                                 OnInterval&& on_interval, std::vector<double>* candidates,
                                 std::vector<HybridState<typename M::Mode>>* post_jump_states) {
    engine_detail::validate_config(cfg);
    ThinningStats stats;
    RngStream rng(cfg.seed, cfg.stream_id);
    HybridState<typename M::Mode> x = cfg.initial_state;
    BoundStrategy strategy = cfg.strategy;
    if (strategy.kind == BoundKind::OptimalQAdaptive && !strategy.readapt_each_jump) {
        const double fallback = std::max(cfg.horizon - x.time, 1e-6);
        strategy =
            BoundStrategy::optimal_q(adaptive_epsilon(model, x, strategy.tail_quantile, fallback));
    }
    RateEnvelope env;
    for (;;) {
        build_envelope(model, x, strategy, cfg.horizon, env);
        NextJump nj;
        try {
            nj = next_jump(model, x, env, rng, cfg.horizon, cfg.proposal_cap, candidates);
        } catch (ProposalCapError& e) {
            throw ProposalCapError(e.what(), stats.total_proposed + e.proposed_so_far,
                                   stats.total_accepted);
        }
        stats.total_proposed += nj.proposals;
        if (!nj.time) {
            stats.residual_proposals = nj.proposals;
            on_interval(x, cfg.horizon, false);
            return stats;
        }
        stats.total_accepted += 1;
        if (cfg.record_tau) {
            stats.per_interjump_proposals.push_back(static_cast<std::uint32_t>(nj.proposals));
        }
        const double t_jump = *nj.time;
        if (!on_interval(x, t_jump, true)) return stats;
        const double v_pre = model.flow(x, t_jump - x.time);
        const HybridState<typename M::Mode> pre{x.mode, v_pre, t_jump};
        x = HybridState<typename M::Mode>{model.sample_kernel(pre, rng), v_pre, t_jump};
        if (post_jump_states) post_jump_states->push_back(x);
    }
}

/// Simulate one path on [initial.time, horizon], recording the trajectory.
template <PdmpModel M>
PathResult<typename M::Mode> simulate_path(const M& model,
                                           const SimulationConfig<typename M::Mode>& cfg) {
    using Mode = typename M::Mode;
    PathResult<Mode> out;
    Trajectory<Mode>& traj = out.trajectory;
    traj.initial = cfg.initial_state;
    traj.horizon = cfg.horizon;
    const FlowCoeffs c0 = model.flow_coefficients(cfg.initial_state.mode);
    traj.initial_segment = {cfg.initial_state.time, cfg.initial_state.voltage, c0.decay, c0.drive};

    auto* cand = cfg.record_candidates ? &out.candidate_times : nullptr;
    out.stats = simulate_path_core(
        model, cfg,
        [](const HybridState<Mode>&, double, bool) { return true; }, cand,
        &traj.post_jump_states);

    traj.jump_times.reserve(traj.post_jump_states.size());
    traj.segments.reserve(traj.post_jump_states.size());
    for (const auto& s : traj.post_jump_states) {
        const FlowCoeffs c = model.flow_coefficients(s.mode);
        traj.jump_times.push_back(s.time);
        traj.segments.push_back({s.time, s.voltage, c.decay, c.drive});
    }
    return out;
}

/// Candidates that were not accepted, in order. Both inputs are ordered;
/// accepted must be a subsequence of candidates.
inline std::vector<double> collect_rejected(const std::vector<double>& candidates,
                                            const std::vector<double>& accepted) {
    std::vector<double> rejected;
    rejected.reserve(candidates.size() - std::min(candidates.size(), accepted.size()));
    std::size_t j = 0;
    for (const double t : candidates) {
        if (j < accepted.size() && accepted[j] == t) {
            ++j;
        } else {
            rejected.push_back(t);
        }
    }
    return rejected;
}

} // namespace pdmp
