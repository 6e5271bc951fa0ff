#pragma once

#include <concepts>
#include <optional>

#include "pdmp/rng.hpp"
#include "pdmp/state.hpp"

namespace pdmp {

/// Behavioural contract a model must satisfy to be simulated by thinning.
///
/// flow               voltage at a given offset along the deterministic flow
///                    started from x (the mode is frozen over the segment)
/// rate               jump rate at a flow point (mode, voltage), >= 0
/// sample_kernel      post-jump mode drawn at the pre-jump flow point
/// voltage_bounds     rigorous flow bounds over a window of offsets
/// rate_sup_from_bounds   upper bound of the rate over a voltage interval;
///                    together with voltage_bounds this factors the envelope
///                    construction: flow bounds x rate monotonicity
/// rate_inf_from_bounds   matching lower bound, used by the adaptive
///                    partition width
/// flow_coefficients  linear ODE coefficients of the mode (trajectory output)
/// global_rate_bound  finite sup of the rate over the reachable set, or
///                    nullopt when the model admits none
template <typename M>
concept PdmpModel =
    std::copy_constructible<typename M::Mode> &&
    requires(const M& m, const HybridState<typename M::Mode>& x,
             const typename M::Mode& mode, RngStream& rng) {
        { m.flow(x, 1.0) } -> std::convertible_to<double>;
        { m.rate(mode, 0.0) } -> std::convertible_to<double>;
        { m.sample_kernel(x, rng) } -> std::same_as<typename M::Mode>;
        { m.voltage_bounds(x, Window{}) } -> std::same_as<VoltageBounds>;
        { m.rate_sup_from_bounds(mode, 0.0, 1.0) } -> std::convertible_to<double>;
        { m.rate_inf_from_bounds(mode, 0.0, 1.0) } -> std::convertible_to<double>;
        { m.flow_coefficients(mode) } -> std::same_as<FlowCoeffs>;
        { m.global_rate_bound() } -> std::same_as<std::optional<double>>;
    };

} // namespace pdmp
