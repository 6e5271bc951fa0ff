#pragma once

#include <optional>
#include <vector>

#include "pdmp/errors.hpp"
#include "pdmp/hh/rates.hpp"
#include "pdmp/model.hpp"
#include "pdmp/rng.hpp"

namespace pdmp::hh {

/// Number of open gates of each type.
struct SubunitMode {
    int open_n = 0;
    int open_m = 0;
    int open_h = 0;

    friend bool operator==(const SubunitMode&, const SubunitMode&) = default;
};

/// Stochastic Hodgkin-Huxley model whose conductance follows the fraction of
/// open gates. Jumps move exactly one gate; the membrane relaxes along the
/// linear ODE dV/dt = -decay * V + drive + I(t)/C between jumps.
class SubunitModel {
public:
    using Mode = SubunitMode;

    explicit SubunitModel(HHParams params)
        : p_(params), v_ceiling_(detail::reachable_voltages(params).high),
          global_bound_(detail::global_rate_bound_value(params)) {}

    const HHParams& params() const { return p_; }

    static Mode all_closed() { return {}; }

    bool valid_mode(const Mode& m) const {
        return m.open_n >= 0 && m.open_n <= p_.n_n() && m.open_m >= 0 && m.open_m <= p_.n_m() &&
               m.open_h >= 0 && m.open_h <= p_.n_h();
    }

    FlowCoeffs flow_coefficients(const Mode& m) const {
        const double fm = static_cast<double>(m.open_m) / p_.n_m();
        const double fh = static_cast<double>(m.open_h) / p_.n_h();
        const double fn = static_cast<double>(m.open_n) / p_.n_n();
        const double g_na_eff = p_.g_na * fm * fm * fm * fh;
        const double fn2 = fn * fn;
        const double g_k_eff = p_.g_k * fn2 * fn2;
        const double inv_c = 1.0 / p_.capacitance;
        return {(p_.g_l + g_na_eff + g_k_eff) * inv_c,
                (p_.g_l * p_.v_l + g_na_eff * p_.v_na + g_k_eff * p_.v_k) * inv_c};
    }

    double flow(const HybridState<Mode>& x, double offset) const {
        const FlowCoeffs c = flow_coefficients(x.mode);
        const FlowSegment seg{x.time, x.voltage, c.decay, c.drive};
        return evaluate_flow(seg, x.time + offset, p_.pulse, p_.capacitance);
    }

    double rate(const Mode& m, double v) const {
        const GateRates g = gate_rates(v);
        return g.alpha_n * (p_.n_n() - m.open_n) + g.beta_n * m.open_n +
               g.alpha_m * (p_.n_m() - m.open_m) + g.beta_m * m.open_m +
               g.alpha_h * (p_.n_h() - m.open_h) + g.beta_h * m.open_h;
    }

    /// Exact transition distribution of the jump kernel at voltage v:
    /// one gate opens or closes, with probability (rate * count) / total.
    std::vector<std::pair<Mode, double>> kernel_distribution(const Mode& m, double v) const {
        double w[6];
        const double total = event_weights(m, v, w);
        if (!(total > 0.0)) throw ModelError("subunit kernel invoked at zero jump rate");
        std::vector<std::pair<Mode, double>> out;
        out.reserve(6);
        for (int e = 0; e < 6; ++e) {
            if (w[e] > 0.0) out.emplace_back(apply_event(m, e), w[e] / total);
        }
        return out;
    }

    Mode sample_kernel(const HybridState<Mode>& x, RngStream& rng) const {
        double w[6];
        const double total = event_weights(x.mode, x.voltage, w);
        if (!(total > 0.0)) throw ModelError("subunit kernel invoked at zero jump rate");
        return apply_event(x.mode, pick_event(w, total, rng));
    }

    VoltageBounds voltage_bounds(const HybridState<Mode>& x, Window w) const {
        return detail::flow_voltage_bounds(flow_coefficients(x.mode), x.voltage, x.time, w,
                                           p_.pulse, p_.capacitance, v_ceiling_);
    }

    /// Rate bound over a voltage interval: increasing rates at the high end,
    /// decreasing rates at the low end.
    double rate_sup_from_bounds(const Mode& m, double v_low, double v_high) const {
        const GateRates up = gate_rates(v_high);
        const GateRates dn = gate_rates(v_low);
        return up.alpha_n * (p_.n_n() - m.open_n) + dn.beta_n * m.open_n +
               up.alpha_m * (p_.n_m() - m.open_m) + dn.beta_m * m.open_m +
               dn.alpha_h * (p_.n_h() - m.open_h) + up.beta_h * m.open_h;
    }

    double rate_inf_from_bounds(const Mode& m, double v_low, double v_high) const {
        const GateRates up = gate_rates(v_high);
        const GateRates dn = gate_rates(v_low);
        return dn.alpha_n * (p_.n_n() - m.open_n) + up.beta_n * m.open_n +
               dn.alpha_m * (p_.n_m() - m.open_m) + up.beta_m * m.open_m +
               up.alpha_h * (p_.n_h() - m.open_h) + dn.beta_h * m.open_h;
    }

    std::optional<double> global_rate_bound() const { return global_bound_; }

private:
    // Event order: n opens, n closes, m opens, m closes, h opens, h closes.
    double event_weights(const Mode& m, double v, double (&w)[6]) const {
        const GateRates g = gate_rates(v);
        w[0] = g.alpha_n * (p_.n_n() - m.open_n);
        w[1] = g.beta_n * m.open_n;
        w[2] = g.alpha_m * (p_.n_m() - m.open_m);
        w[3] = g.beta_m * m.open_m;
        w[4] = g.alpha_h * (p_.n_h() - m.open_h);
        w[5] = g.beta_h * m.open_h;
        return w[0] + w[1] + w[2] + w[3] + w[4] + w[5];
    }

    static int pick_event(const double (&w)[6], double total, RngStream& rng) {
        double u = rng.next_uniform() * total;
        int last_positive = 0;
        for (int e = 0; e < 6; ++e) {
            if (w[e] <= 0.0) continue;
            last_positive = e;
            u -= w[e];
            if (u <= 0.0) return e;
        }
        return last_positive; // guards against rounding residue in u
    }

    static Mode apply_event(Mode m, int event) {
        switch (event) {
            case 0: ++m.open_n; break;
            case 1: --m.open_n; break;
            case 2: ++m.open_m; break;
            case 3: --m.open_m; break;
            case 4: ++m.open_h; break;
            case 5: --m.open_h; break;
        }
        return m;
    }

    HHParams p_;
    double v_ceiling_;
    double global_bound_;
};

} // namespace pdmp::hh
