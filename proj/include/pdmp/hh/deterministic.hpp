#pragma once

#include <optional>
#include <vector>

#include "pdmp/hh/rates.hpp"

namespace pdmp::hh {

/// State of the four-dimensional deterministic Hodgkin-Huxley system.
struct DeterministicState {
    double v = 0.0;
    double m = 0.0;
    double h = 0.0;
    double n = 0.0;
};

struct DeterministicSample {
    double time = 0.0;
    DeterministicState state{};
};

/// Gate steady state alpha / (alpha + beta) at a fixed voltage.
DeterministicState gate_steady_state(double v);

/// Fixed-step RK4 integration of the deterministic system. The grid is
/// aligned on the pulse switch times so the discontinuous current never
/// lands inside a step. Reference integrator only; the stochastic models
/// never touch it.
std::vector<DeterministicSample> integrate_deterministic(const HHParams& params,
                                                         DeterministicState initial,
                                                         double horizon, double step);

/// First time the deterministic voltage reaches `threshold`, refined inside
/// the bracketing step by bisection. Empty when no crossing occurs before
/// the horizon.
std::optional<double> deterministic_spike_time(const HHParams& params,
                                               DeterministicState initial, double threshold,
                                               double horizon, double step);

} // namespace pdmp::hh
