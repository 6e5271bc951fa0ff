#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "pdmp/flow.hpp"

namespace pdmp {

/// A point of the hybrid process: discrete mode, membrane voltage, absolute time.
template <typename ModeT>
struct HybridState {
    ModeT mode{};
    double voltage = 0.0; // mV
    double time = 0.0;    // ms, absolute

    bool finite() const {
        return std::isfinite(voltage) && std::isfinite(time) && time >= 0.0;
    }
};

/// Half-open window [begin, end) of flow offsets; end may be +infinity.
struct Window {
    double begin = 0.0;
    double end = std::numeric_limits<double>::infinity();

    bool unbounded() const { return !std::isfinite(end); }
};

/// Lower and upper bound of the voltage flow over a window.
struct VoltageBounds {
    double low = 0.0;
    double high = 0.0;
};

/// Jump skeleton of one simulated path. jump_times, post_jump_states and
/// segments run in lockstep (one entry per accepted jump); the flow before
/// the first jump is carried by initial/initial_segment.
template <typename ModeT>
struct Trajectory {
    HybridState<ModeT> initial{};
    FlowSegment initial_segment{};
    std::vector<double> jump_times;
    std::vector<HybridState<ModeT>> post_jump_states;
    std::vector<FlowSegment> segments;
    double horizon = 0.0;

    std::size_t jump_count() const { return jump_times.size(); }

    bool well_formed() const {
        if (jump_times.size() != post_jump_states.size()) return false;
        if (jump_times.size() != segments.size()) return false;
        double prev = initial.time;
        for (std::size_t i = 0; i < jump_times.size(); ++i) {
            if (!(jump_times[i] > prev)) return false;
            if (jump_times[i] > horizon) return false;
            if (!post_jump_states[i].finite()) return false;
            if (segments[i].start_time != jump_times[i]) return false;
            prev = jump_times[i];
        }
        return true;
    }

    /// Segment whose flow interval contains absolute time t.
    const FlowSegment& segment_at(double t) const {
        if (jump_times.empty() || t < jump_times.front()) return initial_segment;
        std::size_t lo = 0;
        std::size_t hi = jump_times.size();
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            (jump_times[mid] <= t ? lo : hi) = mid;
        }
        return segments[lo];
    }
};

} // namespace pdmp
