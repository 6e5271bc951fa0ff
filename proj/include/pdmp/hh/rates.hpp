#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "pdmp/flow.hpp"
#include "pdmp/state.hpp"

namespace pdmp::hh {

/// Opening/closing rates of the three gate types at a given voltage.
struct GateRates {
    double alpha_n, beta_n;
    double alpha_m, beta_m;
    double alpha_h, beta_h;
};

/// z / (e^z - 1), with the removable singularity at z = 0 filled in by its
/// series. Direct evaluation at z = 0 is 0/0; expm1 keeps the tails stable.
inline double ratio_expm1(double z) {
    if (std::abs(z) < 1e-6) return 1.0 - z / 2.0 + z * z / 12.0;
    return z / std::expm1(z);
}

/// Voltage-dependent gate rates. alpha_n and alpha_m have removable
/// singularities (at V = 10 and V = 25) that evaluate to their limits.
/// alpha_n, alpha_m, beta_h increase with V; beta_n, beta_m, alpha_h decrease.
inline GateRates gate_rates(double v) {
    GateRates r;
    r.alpha_n = 0.1 * ratio_expm1(1.0 - 0.1 * v);
    r.beta_n = 0.125 * std::exp(-v / 80.0);
    r.alpha_m = ratio_expm1(2.5 - 0.1 * v);
    r.beta_m = 4.0 * std::exp(-v / 18.0);
    r.alpha_h = 0.07 * std::exp(-v / 20.0);
    r.beta_h = 1.0 / (std::exp(3.0 - 0.1 * v) + 1.0);
    return r;
}

/// Membrane constants, channel counts and the stimulation pulse.
/// Units: mV, mS/cm², µF/cm², ms.
struct HHParams {
    double v_na = 115.0;
    double g_na = 120.0;
    double v_k = -12.0;
    double g_k = 36.0;
    double v_l = 0.0;
    double g_l = 0.3;
    double capacitance = 1.0;
    int n_na = 1;
    int n_k = 1;
    PulseCurrent pulse{};

    int n_m() const { return 3 * n_na; }
    int n_h() const { return n_na; }
    int n_n() const { return 4 * n_k; }

    static HHParams with_channels(int n_channels, PulseCurrent pulse = {}) {
        HHParams p;
        p.n_na = n_channels;
        p.n_k = n_channels;
        p.pulse = pulse;
        return p;
    }
};

namespace detail {

/// Closed interval the voltage cannot leave, starting anywhere inside it.
/// Without stimulation this is [min resting potential, max resting potential];
/// the pulse shifts every mode's equilibrium to (drive + K/C) / decay, so the
/// upper end grows only if some conductance corner pushes past the resting
/// ceiling. Corners suffice: the equilibrium is monotone in each conductance
/// fraction.
inline VoltageBounds reachable_voltages(const HHParams& p) {
    double lo = std::min({p.v_na, p.v_k, p.v_l});
    double hi = std::max({p.v_na, p.v_k, p.v_l});
    const double k_over_c = p.pulse.active() ? p.pulse.amplitude / p.capacitance : 0.0;
    for (const double u : {0.0, 1.0}) {
        for (const double w : {0.0, 1.0}) {
            const double a = (p.g_l + u * p.g_na + w * p.g_k) / p.capacitance;
            const double b =
                (p.g_l * p.v_l + u * p.g_na * p.v_na + w * p.g_k * p.v_k) / p.capacitance;
            hi = std::max(hi, (b + k_over_c) / a);
            lo = std::min(lo, b / a);
        }
    }
    return {lo, hi};
}

/// State-free bound on the jump rate: each gate type contributes at most
/// N_x * max(alpha_x, beta_x) over the reachable voltages, and every gate
/// rate is monotone in V, so interval maxima sit at the endpoints.
inline double global_rate_bound_value(const HHParams& p) {
    const VoltageBounds v = reachable_voltages(p);
    const GateRates lo = gate_rates(v.low);
    const GateRates hi = gate_rates(v.high);
    const double m_rate = std::max({lo.alpha_m, hi.alpha_m, lo.beta_m, hi.beta_m});
    const double h_rate = std::max({lo.alpha_h, hi.alpha_h, lo.beta_h, hi.beta_h});
    const double n_rate = std::max({lo.alpha_n, hi.alpha_n, lo.beta_n, hi.beta_n});
    return p.n_m() * m_rate + p.n_h() * h_rate + p.n_n() * n_rate;
}

/// Rigorous flow bounds over a window of offsets from (t0, v0). The
/// pulse-free part is monotone between v0 and the equilibrium, so its range
/// is an endpoint pair; the pulse contribution is padded by its exact decayed
/// integral on finite windows and by K / (C * decay) on unbounded ones.
/// `ceiling` caps the high side (the flow cannot exceed max(v0, ceiling):
/// dV/dt <= -decay * (V - (drive + K/C)/decay) pins every trajectory under
/// its stimulated equilibrium, and the ceiling majorizes those over modes).
inline VoltageBounds flow_voltage_bounds(const FlowCoeffs& c, double v0, double t0, Window w,
                                         const PulseCurrent& pulse, double capacitance,
                                         double ceiling = std::numeric_limits<double>::infinity()) {
    const double a = c.decay;
    const double eq = c.drive / a;
    const double v_cap = std::max(v0, ceiling);
    const auto homogeneous = [&](double u) {
        const double damp = std::exp(-a * u);
        return v0 * damp + eq * (1.0 - damp);
    };
    const double f1 = homogeneous(w.begin);
    if (w.unbounded()) {
        double high = std::max(f1, eq);
        if (pulse.active()) high += pulse.amplitude / (capacitance * a);
        return {std::min(f1, eq), std::min(high, v_cap)};
    }
    const double f2 = homogeneous(w.end);
    // The pulse term is capped both by its exact decayed integral over the
    // window and by the uniform ceiling K / (C a); the minimum keeps windowed
    // bounds below the unbounded-window bound, so the level ordering
    // global >= local >= windowed segment holds by construction.
    double pad_high = decayed_pulse_mass(a, t0, w.end, w.begin, pulse) / capacitance;
    if (pulse.active()) pad_high = std::min(pad_high, pulse.amplitude / (capacitance * a));
    const double pad_low = decayed_pulse_mass(a, t0, w.begin, w.end, pulse) / capacitance;
    return {std::min(f1, f2) + pad_low, std::min(std::max(f1, f2) + pad_high, v_cap)};
}

} // namespace detail

} // namespace pdmp::hh
