#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pdmp/errors.hpp"
#include "pdmp/model.hpp"
#include "pdmp/numeric/compensated.hpp"

namespace pdmp {

enum class BoundKind { Global, Local, OptimalP, OptimalQ, OptimalQAdaptive };

/// Which jump-rate envelope to build for each inter-jump interval.
struct BoundStrategy {
    BoundKind kind = BoundKind::Global;
    double epsilon = 0.1;        // partition width for OptimalP / OptimalQ, ms
    double tail_quantile = 0.05; // OptimalQAdaptive: target P(inter-jump > eps_n)
    /// OptimalQAdaptive only: recompute the width at every jump instead of
    /// resolving it once against the run's starting state. The width never
    /// affects exactness, only the rejection rate; the published acceptance
    /// tables correspond to the resolved-once behaviour, while per-jump
    /// readaptation tightens the head during high-rate excursions and pushes
    /// acceptance above them.
    bool readapt_each_jump = false;

    static BoundStrategy global() { return {BoundKind::Global, 0.0, 0.05, false}; }
    static BoundStrategy local() { return {BoundKind::Local, 0.0, 0.05, false}; }
    static BoundStrategy optimal_p(double eps) { return {BoundKind::OptimalP, eps, 0.05, false}; }
    static BoundStrategy optimal_q(double eps) { return {BoundKind::OptimalQ, eps, 0.05, false}; }
    static BoundStrategy optimal_q_adaptive(double quantile = 0.05, bool readapt = false) {
        return {BoundKind::OptimalQAdaptive, 0.0, quantile, readapt};
    }

    std::string label() const {
        switch (kind) {
            case BoundKind::Global: return "global";
            case BoundKind::Local: return "local";
            case BoundKind::OptimalP: return "optimal-p(" + format_eps(epsilon) + ")";
            case BoundKind::OptimalQ: return "optimal-q(" + format_eps(epsilon) + ")";
            case BoundKind::OptimalQAdaptive: return "optimal-q-adaptive";
        }
        return "?";
    }

private:
    static std::string format_eps(double eps) {
        std::string s = std::to_string(eps);
        while (s.size() > 1 && s.back() == '0') s.pop_back();
        if (!s.empty() && s.back() == '.') s.pop_back();
        return s;
    }
};

/// Piecewise-constant upper bound of the jump rate on [anchor, +inf), with
/// its exact integral and exact inverse.
///
/// Three shapes cover all strategies: a single constant level, a head/tail
/// pair, and a lazily generated uniform partition whose segments materialize
/// only as the thinning clock advances. Accessors are non-const because
/// evaluation may extend a lazy envelope.
class RateEnvelope {
public:
    struct Point {
        double time;  // absolute, ms
        double level; // envelope level at that time
    };

    void reset_constant(double anchor, double level) {
        clear(anchor);
        tail_unbounded_ = true;
        push(0.0, level);
    }

    void reset_two_piece(double anchor, double eps, double head_level, double tail_level) {
        clear(anchor);
        tail_unbounded_ = true;
        push(0.0, head_level);
        push(eps, tail_level);
    }

    /// level_for(k) must return the bound on [k*width, (k+1)*width).
    void reset_lazy(double anchor, double width, std::function<double(std::size_t)> level_for) {
        clear(anchor);
        tail_unbounded_ = false;
        width_ = width;
        level_for_ = std::move(level_for);
    }

    double anchor() const { return anchor_; }
    bool lazy() const { return !tail_unbounded_; }

    std::size_t materialized_segments() const { return levels_.size(); }
    double segment_start(std::size_t i) const { return starts_[i]; }
    double segment_level(std::size_t i) const { return levels_[i]; }

    /// Envelope level at absolute time t >= anchor. Segments are half-open
    /// [u_k, u_{k+1}), so a breakpoint evaluates to its right segment.
    double value(double t) {
        return levels_[locate_time(offset_of(t))];
    }

    /// Integrated bound: exact piecewise-linear accumulation from the anchor.
    double integral(double t) {
        const double off = offset_of(t);
        const std::size_t i = locate_time(off);
        return mass_start_[i] + levels_[i] * (off - starts_[i]);
    }

    double inverse(double mass) { return inverse_point(mass).time; }

    /// Inverse of the integrated bound, returning the segment level at the
    /// result as well (the thinning loop needs both).
    Point inverse_point(double mass) {
        if (!(mass >= 0.0)) throw std::invalid_argument("envelope inverse needs mass >= 0");
        const std::size_t i = locate_mass(mass);
        const double level = levels_[i];
        const double time = anchor_ + starts_[i] + (mass - mass_start_[i]) / level;
        return {time, level};
    }

private:
    static constexpr std::size_t kMaxSegments = std::size_t{1} << 26;

    void clear(double anchor) {
        anchor_ = anchor;
        starts_.clear();
        levels_.clear();
        mass_start_.clear();
        mass_acc_.reset();
        level_for_ = nullptr;
        width_ = 0.0;
        hint_ = 0;
    }

    void push(double start, double level) {
        if (!(level >= 0.0) || !std::isfinite(level)) {
            throw NumericError("envelope level must be finite and non-negative");
        }
        if (!starts_.empty()) {
            mass_acc_.add(levels_.back() * (start - starts_.back()));
        }
        starts_.push_back(start);
        levels_.push_back(level);
        mass_start_.push_back(mass_acc_.value());
    }

    void materialize_next() {
        const std::size_t k = levels_.size();
        if (k >= kMaxSegments) {
            throw InfiniteHorizonError("envelope mass accumulates too slowly to invert");
        }
        push(static_cast<double>(k) * width_, level_for_(k));
    }

    double offset_of(double t) {
        double off = t - anchor_;
        if (off < 0.0) {
            if (off < -1e-9 * (1.0 + std::abs(anchor_))) {
                throw std::invalid_argument("envelope evaluated before its anchor");
            }
            off = 0.0;
        }
        return off;
    }

    std::size_t locate_time(double off) {
        if (lazy()) {
            auto idx = static_cast<std::size_t>(off / width_);
            while (levels_.size() <= idx) materialize_next();
            return idx;
        }
        std::size_t i = starts_.size() - 1;
        while (i > 0 && starts_[i] > off) --i;
        return i;
    }

    // First segment whose mass range contains `mass`. Calls within one
    // inter-jump interval have non-decreasing mass, so scanning from the
    // last hit is O(1) amortized.
    std::size_t locate_mass(double mass) {
        if (hint_ >= levels_.size()) hint_ = 0;
        if (hint_ > 0 && mass < mass_start_[hint_]) hint_ = 0;
        std::size_t i = hint_;
        for (;;) {
            if (i + 1 < levels_.size()) {
                if (mass < mass_start_[i + 1]) break;
                ++i;
                continue;
            }
            if (tail_unbounded_) {
                if (levels_[i] <= 0.0 && mass > mass_start_[i]) {
                    throw InfiniteHorizonError("envelope has finite total mass");
                }
                break;
            }
            materialize_next();
        }
        // Skip zero-level segments that carry no mass.
        while (levels_[i] <= 0.0 && i + 1 < levels_.size() && mass >= mass_start_[i + 1]) ++i;
        if (levels_[i] <= 0.0) {
            if (tail_unbounded_ && i + 1 == levels_.size()) {
                throw InfiniteHorizonError("envelope has finite total mass");
            }
            throw InfiniteHorizonError("envelope mass landed on a zero-level segment");
        }
        hint_ = i;
        return i;
    }

    double anchor_ = 0.0;
    bool tail_unbounded_ = true;
    double width_ = 0.0;
    std::vector<double> starts_;     // segment start offsets, starts_[0] == 0
    std::vector<double> levels_;
    std::vector<double> mass_start_; // integrated bound at each segment start
    CompensatedSum mass_acc_;
    std::function<double(std::size_t)> level_for_;
    std::size_t hint_ = 0;
};

namespace envelope_detail {

template <PdmpModel M>
double finite_sup(const M& model, const HybridState<typename M::Mode>& x, Window w,
                  const char* what) {
    const VoltageBounds vb = model.voltage_bounds(x, w);
    const double level = model.rate_sup_from_bounds(x.mode, vb.low, vb.high);
    if (!std::isfinite(level)) throw UnsupportedStrategyError(what);
    return level;
}

} // namespace envelope_detail

/// Build the envelope for the inter-jump interval starting at post-jump
/// state x. `horizon` only feeds the adaptive-width fallback when the lower
/// rate bound degenerates to zero.
template <PdmpModel M>
void build_envelope(const M& model, const HybridState<typename M::Mode>& x,
                    const BoundStrategy& strategy, double horizon, RateEnvelope& env) {
    switch (strategy.kind) {
        case BoundKind::Global: {
            const auto bound = model.global_rate_bound();
            if (!bound || !std::isfinite(*bound)) {
                throw UnsupportedStrategyError("model reports no finite global rate bound");
            }
            env.reset_constant(x.time, *bound);
            return;
        }
        case BoundKind::Local: {
            env.reset_constant(x.time, envelope_detail::finite_sup(
                                           model, x, Window{}, "local bound is not finite"));
            return;
        }
        case BoundKind::OptimalP: {
            const double eps = strategy.epsilon;
            if (!(eps > 0.0)) throw std::invalid_argument("optimal-p needs epsilon > 0");
            env.reset_lazy(x.time, eps, [&model, x, eps](std::size_t k) {
                const Window w{static_cast<double>(k) * eps, static_cast<double>(k + 1) * eps};
                const VoltageBounds vb = model.voltage_bounds(x, w);
                const double level = model.rate_sup_from_bounds(x.mode, vb.low, vb.high);
                if (!std::isfinite(level)) {
                    throw NumericError("optimal-p segment level is not finite");
                }
                return level;
            });
            return;
        }
        case BoundKind::OptimalQ:
        case BoundKind::OptimalQAdaptive: {
            double eps = strategy.epsilon;
            const VoltageBounds vb = model.voltage_bounds(x, Window{});
            const double tail = model.rate_sup_from_bounds(x.mode, vb.low, vb.high);
            if (!std::isfinite(tail)) {
                throw UnsupportedStrategyError("optimal-q tail bound is not finite");
            }
            if (strategy.kind == BoundKind::OptimalQAdaptive) {
                const double lower = model.rate_inf_from_bounds(x.mode, vb.low, vb.high);
                eps = lower > 0.0 ? -std::log(strategy.tail_quantile) / lower
                                  : std::max(horizon - x.time, 1e-6);
            }
            if (!(eps > 0.0)) throw std::invalid_argument("optimal-q needs epsilon > 0");
            const double head =
                envelope_detail::finite_sup(model, x, Window{0.0, eps}, "optimal-q head bound");
            env.reset_two_piece(x.time, eps, head, tail);
            return;
        }
    }
    throw std::invalid_argument("unknown bound strategy");
}

template <PdmpModel M>
RateEnvelope build_envelope(const M& model, const HybridState<typename M::Mode>& x,
                            const BoundStrategy& strategy,
                            double horizon = std::numeric_limits<double>::infinity()) {
    RateEnvelope env;
    build_envelope(model, x, strategy, horizon, env);
    return env;
}

/// Adaptive partition width: the width a lower bound of the rate assigns to
/// the tail_quantile survival level, -log(q) / lower_rate.
template <PdmpModel M>
double adaptive_epsilon(const M& model, const HybridState<typename M::Mode>& x,
                        double tail_quantile = 0.05,
                        double fallback = std::numeric_limits<double>::infinity()) {
    const VoltageBounds vb = model.voltage_bounds(x, Window{});
    const double lower = model.rate_inf_from_bounds(x.mode, vb.low, vb.high);
    return lower > 0.0 ? -std::log(tail_quantile) / lower : fallback;
}

} // namespace pdmp
