#pragma once

#include <algorithm>
#include <cmath>

#include "pdmp/errors.hpp"

namespace pdmp {

/// Rectangular stimulation current K * 1_[t_on, t_off](t), in absolute time.
struct PulseCurrent {
    double amplitude = 0.0; // K, µA/cm²
    double t_on = 0.0;      // ms
    double t_off = 0.0;     // ms

    bool active() const { return amplitude != 0.0 && t_off > t_on; }
};

/// Coefficients of the linear voltage ODE dV/dt = -decay * V + drive + I(t)/C
/// that governs the membrane between two jumps.
struct FlowCoeffs {
    double decay = 0.0; // 1/ms
    double drive = 0.0; // mV/ms
};

/// One inter-jump piece of a trajectory: the state of the linear flow at the
/// segment start. The discrete mode lives next to it in the trajectory.
struct FlowSegment {
    double start_time = 0.0;    // ms, absolute
    double start_voltage = 0.0; // mV
    double decay = 0.0;         // 1/ms
    double drive = 0.0;         // mV/ms
};

/// Exact integral of e^{decay * (s - t_anchor)} * I(s) over [t_anchor, t].
///
/// Grows like e^{decay * (t - t_anchor)}; callers that need the decayed value
/// should use decayed_pulse_mass below instead.
inline double pulse_integral(double decay, double t_anchor, double t, const PulseCurrent& pulse) {
    const double lo = std::max(t_anchor, pulse.t_on);
    const double hi = std::min(t, pulse.t_off);
    if (!(hi > lo) || pulse.amplitude == 0.0) return 0.0;
    return pulse.amplitude / decay *
           (std::exp(decay * (hi - t_anchor)) - std::exp(decay * (lo - t_anchor)));
}

/// e^{-decay * shift} * \int_0^{upto} e^{decay * s} I(t_anchor + s) ds, in
/// flow offsets. All exponents are kept <= decay * (upto - shift), so the
/// value stays representable whenever the window is narrow, no matter how
/// far the anchor sits from zero.
inline double decayed_pulse_mass(double decay, double t_anchor, double upto, double shift,
                                 const PulseCurrent& pulse) {
    const double lo = std::max(0.0, pulse.t_on - t_anchor);
    const double hi = std::min(upto, pulse.t_off - t_anchor);
    if (!(hi > lo) || pulse.amplitude == 0.0) return 0.0;
    return pulse.amplitude / decay * (std::exp(decay * (hi - shift)) - std::exp(decay * (lo - shift)));
}

/// Closed-form solution of the segment ODE at absolute time t >= start_time,
/// pulse integral included. Evaluated in decayed form: no positive exponent
/// is ever formed, so large decay * dt cannot overflow.
inline double evaluate_flow(const FlowSegment& seg, double t, const PulseCurrent& pulse,
                            double capacitance = 1.0) {
    const double dt = t - seg.start_time;
    const double a = seg.decay;
    const double damp = std::exp(-a * dt);
    const double equilibrium = seg.drive / a;
    double v = seg.start_voltage * damp + equilibrium * (1.0 - damp);
    v += decayed_pulse_mass(a, seg.start_time, dt, dt, pulse) / capacitance;
    if (!std::isfinite(v)) {
        throw NumericError("flow evaluation produced a non-finite voltage");
    }
    return v;
}

} // namespace pdmp
