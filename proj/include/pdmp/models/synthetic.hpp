#pragma once

#include <cmath>
#include <optional>
#include <utility>

#include "pdmp/model.hpp"

namespace pdmp::models {

/// Two-mode flip-flop with a constant jump rate. The continuous variable is
/// frozen, so every distributional property is known in closed form; the
/// validation suite leans on it heavily. `bound_factor` inflates the reported
/// global bound (an envelope only has to dominate, not to be tight), which
/// gives a knob for forcing a known rejection rate.
class ConstantRateModel {
public:
    using Mode = int;

    explicit ConstantRateModel(double rate, double bound_factor = 1.0)
        : rate_(rate), bound_factor_(bound_factor) {}

    double flow(const HybridState<Mode>& x, double) const { return x.voltage; }
    double rate(const Mode&, double) const { return rate_; }
    Mode sample_kernel(const HybridState<Mode>& x, RngStream&) const { return 1 - x.mode; }

    VoltageBounds voltage_bounds(const HybridState<Mode>& x, Window) const {
        return {x.voltage, x.voltage};
    }
    double rate_sup_from_bounds(const Mode&, double, double) const { return rate_; }
    double rate_inf_from_bounds(const Mode&, double, double) const { return rate_; }
    FlowCoeffs flow_coefficients(const Mode&) const { return {0.0, 0.0}; }
    std::optional<double> global_rate_bound() const { return rate_ * bound_factor_; }

private:
    double rate_;
    double bound_factor_;
};

/// Inhomogeneous Poisson process embedded as a PDMP: the continuous variable
/// is a clock (dV/dt = 1), so the jump rate reads absolute time. RateFn maps
/// the clock to a rate; SupFn/InfFn must return its exact sup/inf over a
/// clock interval (hi may be +inf).
template <typename RateFn, typename SupFn, typename InfFn>
class ClockRateModel {
public:
    using Mode = int;

    ClockRateModel(RateFn rate, SupFn sup, InfFn inf, std::optional<double> global_bound)
        : rate_(std::move(rate)), sup_(std::move(sup)), inf_(std::move(inf)),
          global_bound_(global_bound) {}

    double flow(const HybridState<Mode>& x, double offset) const { return x.voltage + offset; }
    double rate(const Mode&, double clock) const { return rate_(clock); }
    Mode sample_kernel(const HybridState<Mode>& x, RngStream&) const { return 1 - x.mode; }

    VoltageBounds voltage_bounds(const HybridState<Mode>& x, Window w) const {
        return {x.voltage + w.begin, x.voltage + w.end};
    }
    double rate_sup_from_bounds(const Mode&, double lo, double hi) const { return sup_(lo, hi); }
    double rate_inf_from_bounds(const Mode&, double lo, double hi) const { return inf_(lo, hi); }
    FlowCoeffs flow_coefficients(const Mode&) const { return {0.0, 1.0}; }
    std::optional<double> global_rate_bound() const { return global_bound_; }

private:
    RateFn rate_;
    SupFn sup_;
    InfFn inf_;
    std::optional<double> global_bound_;
};

namespace detail {

inline bool interval_contains_phase(double lo, double hi, double phase, double period) {
    // Is phase + k*period inside [lo, hi] for some integer k?
    const double k = std::ceil((lo - phase) / period);
    return phase + k * period <= hi;
}

} // namespace detail

/// rate(t) = 1 + sin^2(t): bounded, oscillating, with exact interval extrema.
inline auto make_sin_squared_model(std::optional<double> global_bound = 2.0) {
    constexpr double pi = 3.14159265358979323846;
    auto rate = [](double t) { return 1.0 + std::sin(t) * std::sin(t); };
    auto sup = [rate, pi](double lo, double hi) {
        if (!std::isfinite(hi) || hi - lo >= pi) return 2.0;
        if (detail::interval_contains_phase(lo, hi, pi / 2.0, pi)) return 2.0;
        return std::max(rate(lo), rate(hi));
    };
    auto inf = [rate, pi](double lo, double hi) {
        if (!std::isfinite(hi) || hi - lo >= pi) return 1.0;
        if (detail::interval_contains_phase(lo, hi, 0.0, pi)) return 1.0;
        return std::min(rate(lo), rate(hi));
    };
    return ClockRateModel<decltype(rate), decltype(sup), decltype(inf)>(rate, sup, inf,
                                                                        global_bound);
}

/// rate(t) = t: unbounded, so only windowed partitions can envelope it.
inline auto make_linear_rate_model() {
    auto rate = [](double t) { return t; };
    auto sup = [](double, double hi) { return hi; };
    auto inf = [](double lo, double) { return lo; };
    return ClockRateModel<decltype(rate), decltype(sup), decltype(inf)>(rate, sup, inf,
                                                                        std::nullopt);
}

} // namespace pdmp::models
