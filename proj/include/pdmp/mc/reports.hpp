#pragma once

#include <cstdint>
#include <string>

namespace pdmp::mc {

/// Monte Carlo estimate of the rate of acceptance, E[N_t / Ntilde_t | Ntilde_t >= 1],
/// plus the mean number of proposals per accepted jump. Trials that propose
/// nothing are excluded from the ratio and reported separately.
struct AcceptanceReport {
    std::string model;
    std::string strategy;
    int n_chan = 0;
    double epsilon = 0.0; // partition width when the strategy carries one
    std::uint64_t trials = 0;
    std::uint64_t trials_with_proposals = 0;
    double mean_acceptance = 0.0;
    double std_error = 0.0;
    double mean_tau = 0.0;
    double tau_std_error = 0.0;
    double mean_proposed = 0.0;
    double mean_accepted = 0.0;
    double max_interjump = 0.0; // diagnostic: largest observed inter-jump time
    double wall_seconds = 0.0;  // informational only, never serialized
};

/// First-passage statistics of the voltage over a threshold, conditional on
/// the crossing happening before the horizon.
struct SpikingReport {
    std::string model;
    int n_chan = 0;
    std::uint64_t trials = 0;
    std::uint64_t spikes = 0;
    double spike_fraction = 0.0;
    double mean_spike_time = 0.0; // conditional on a spike; 0 when none occurred
    double std_spike_time = 0.0;
    double mean_std_error = 0.0;
    double threshold = 0.0;
    double horizon = 0.0;
    double wall_seconds = 0.0;
};

} // namespace pdmp::mc
