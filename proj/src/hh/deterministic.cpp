#include "pdmp/hh/deterministic.hpp"

#include <algorithm>
#include <cmath>

namespace pdmp::hh {

namespace {

DeterministicState derivative(const HHParams& p, const DeterministicState& s, double current) {
    const GateRates g = gate_rates(s.v);
    const double m3h = s.m * s.m * s.m * s.h;
    const double n2 = s.n * s.n;
    const double ionic = p.g_l * (s.v - p.v_l) + p.g_na * m3h * (s.v - p.v_na) +
                         p.g_k * n2 * n2 * (s.v - p.v_k);
    DeterministicState d;
    d.v = (current - ionic) / p.capacitance;
    d.m = g.alpha_m * (1.0 - s.m) - g.beta_m * s.m;
    d.h = g.alpha_h * (1.0 - s.h) - g.beta_h * s.h;
    d.n = g.alpha_n * (1.0 - s.n) - g.beta_n * s.n;
    return d;
}

DeterministicState axpy(const DeterministicState& s, double c, const DeterministicState& d) {
    return {s.v + c * d.v, s.m + c * d.m, s.h + c * d.h, s.n + c * d.n};
}

DeterministicState rk4_step(const HHParams& p, const DeterministicState& s, double current,
                            double h) {
    const DeterministicState k1 = derivative(p, s, current);
    const DeterministicState k2 = derivative(p, axpy(s, h / 2.0, k1), current);
    const DeterministicState k3 = derivative(p, axpy(s, h / 2.0, k2), current);
    const DeterministicState k4 = derivative(p, axpy(s, h, k3), current);
    DeterministicState out = s;
    out.v += h / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
    out.m += h / 6.0 * (k1.m + 2.0 * k2.m + 2.0 * k3.m + k4.m);
    out.h += h / 6.0 * (k1.h + 2.0 * k2.h + 2.0 * k3.h + k4.h);
    out.n += h / 6.0 * (k1.n + 2.0 * k2.n + 2.0 * k3.n + k4.n);
    return out;
}

// Piece boundaries: start, pulse switch times, horizon. The current is
// constant inside every piece.
std::vector<double> piece_boundaries(const HHParams& p, double horizon) {
    std::vector<double> ts = {0.0, horizon};
    if (p.pulse.active()) {
        if (p.pulse.t_on > 0.0 && p.pulse.t_on < horizon) ts.push_back(p.pulse.t_on);
        if (p.pulse.t_off > 0.0 && p.pulse.t_off < horizon) ts.push_back(p.pulse.t_off);
    }
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    return ts;
}

double current_in_piece(const HHParams& p, double t_begin, double t_end) {
    if (!p.pulse.active()) return 0.0;
    const double mid = 0.5 * (t_begin + t_end);
    return (mid >= p.pulse.t_on && mid <= p.pulse.t_off) ? p.pulse.amplitude : 0.0;
}

template <typename OnStep>
void integrate(const HHParams& p, DeterministicState s, double horizon, double step, OnStep&& on) {
    const std::vector<double> pieces = piece_boundaries(p, horizon);
    double t = 0.0;
    on(t, s);
    for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
        const double len = pieces[i + 1] - pieces[i];
        const auto n_steps = static_cast<long>(std::ceil(len / step - 1e-12));
        const double h = len / static_cast<double>(std::max<long>(n_steps, 1));
        const double current = current_in_piece(p, pieces[i], pieces[i + 1]);
        for (long k = 0; k < n_steps; ++k) {
            s = rk4_step(p, s, current, h);
            t = pieces[i] + h * static_cast<double>(k + 1);
            if (!on(t, s)) return;
        }
    }
}

} // namespace

DeterministicState gate_steady_state(double v) {
    const GateRates g = gate_rates(v);
    return {v, g.alpha_m / (g.alpha_m + g.beta_m), g.alpha_h / (g.alpha_h + g.beta_h),
            g.alpha_n / (g.alpha_n + g.beta_n)};
}

std::vector<DeterministicSample> integrate_deterministic(const HHParams& params,
                                                         DeterministicState initial,
                                                         double horizon, double step) {
    std::vector<DeterministicSample> out;
    out.reserve(static_cast<std::size_t>(horizon / step) + 8);
    integrate(params, initial, horizon, step, [&](double t, const DeterministicState& s) {
        out.push_back({t, s});
        return true;
    });
    return out;
}

std::optional<double> deterministic_spike_time(const HHParams& params, DeterministicState initial,
                                               double threshold, double horizon, double step) {
    if (initial.v >= threshold) return 0.0;
    std::optional<double> crossing;
    double t_prev = 0.0;
    DeterministicState s_prev = initial;
    integrate(params, initial, horizon, step, [&](double t, const DeterministicState& s) {
        if (s.v >= threshold) {
            // Bisect inside the bracketing step; the state at any trial
            // offset comes from one partial RK4 step, which at these step
            // sizes is far below the requested resolution.
            const double current = current_in_piece(params, t_prev, t);
            double lo = 0.0;
            double hi = t - t_prev;
            for (int it = 0; it < 80 && hi - lo > 1e-12; ++it) {
                const double mid = 0.5 * (lo + hi);
                (rk4_step(params, s_prev, current, mid).v >= threshold ? hi : lo) = mid;
            }
            crossing = t_prev + 0.5 * (lo + hi);
            return false;
        }
        t_prev = t;
        s_prev = s;
        return true;
    });
    return crossing;
}

} // namespace pdmp::hh
