#pragma once

// Test-only reference computations, kept independent of the library's
// closed-form code paths on purpose.

#include <algorithm>
#include <cmath>

#include "pdmp/flow.hpp"

namespace testsupport {

/// Endpoint of dV/dt = -a V + b + I(t)/C by fixed-step RK4 with step
/// halving until the endpoint stabilises to rel_tol. Integrates piecewise
/// between the pulse switch times so the discontinuity never sits inside a
/// step.
inline double linear_ode_rk4(double a, double b, double v0, double t0, double t1,
                             const pdmp::PulseCurrent& pulse, double capacitance = 1.0,
                             double rel_tol = 1e-10) {
    const auto integrate_piece = [&](double v, double lo, double hi, double current) {
        if (!(hi > lo)) return v;
        const auto rhs = [&](double vv) { return -a * vv + b + current / capacitance; };
        double prev = std::numeric_limits<double>::quiet_NaN();
        for (long n = 64; n <= (1L << 22); n *= 2) {
            double vv = v;
            const double h = (hi - lo) / static_cast<double>(n);
            for (long k = 0; k < n; ++k) {
                const double k1 = rhs(vv);
                const double k2 = rhs(vv + 0.5 * h * k1);
                const double k3 = rhs(vv + 0.5 * h * k2);
                const double k4 = rhs(vv + h * k3);
                vv += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            }
            if (!std::isnan(prev) && std::abs(vv - prev) <= rel_tol * (1.0 + std::abs(vv))) {
                return vv;
            }
            prev = vv;
        }
        return prev;
    };

    double cuts[4] = {t0, t1, t1, t1};
    if (pulse.active()) {
        cuts[1] = std::clamp(pulse.t_on, t0, t1);
        cuts[2] = std::clamp(pulse.t_off, t0, t1);
    }
    std::sort(cuts, cuts + 4);
    double v = v0;
    for (int i = 0; i + 1 < 4; ++i) {
        const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
        const double current =
            (pulse.active() && mid >= pulse.t_on && mid <= pulse.t_off) ? pulse.amplitude : 0.0;
        v = integrate_piece(v, cuts[i], cuts[i + 1], current);
    }
    return v;
}

/// Monotone-bisection inverse of a non-decreasing function, bracketing on
/// [lo, hi]; used as the independent oracle for envelope inversion.
template <typename F>
double bisect_inverse(const F& f, double target, double lo, double hi, double tol = 1e-13) {
    for (int i = 0; i < 200 && hi - lo > tol * (1.0 + std::abs(hi)); ++i) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) >= target ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace testsupport
