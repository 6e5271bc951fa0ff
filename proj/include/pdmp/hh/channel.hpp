#pragma once

#include <array>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "pdmp/errors.hpp"
#include "pdmp/hh/rates.hpp"
#include "pdmp/hh/subunit.hpp"
#include "pdmp/model.hpp"
#include "pdmp/rng.hpp"

namespace pdmp::hh {

/// Channel configuration counts: na[j*4 + i] holds the number of sodium
/// channels with i open m-gates and j open h-gates; k[c] the number of
/// potassium channels with c open n-gates. Conducting states are (m3, h1)
/// and n4. Aggregate counts only: memory does not grow with the channel
/// population.
struct ChannelMode {
    std::array<int, 8> na{};
    std::array<int, 5> k{};

    int na_state(int open_m, int open_h) const { return na[open_h * 4 + open_m]; }
    int conducting_na() const { return na[7]; }
    int conducting_k() const { return k[4]; }

    friend bool operator==(const ChannelMode&, const ChannelMode&) = default;
};

/// Gate-count projection: total open n, m and h gates implied by a channel
/// configuration.
inline SubunitMode eta(const ChannelMode& c) {
    SubunitMode s;
    for (int state = 1; state <= 4; ++state) s.open_n += state * c.k[state];
    for (int j = 0; j <= 1; ++j) {
        for (int i = 0; i <= 3; ++i) s.open_m += i * c.na[j * 4 + i];
    }
    for (int i = 0; i <= 3; ++i) s.open_h += c.na[4 + i];
    return s;
}

/// Closing-rate coefficients of the potassium ladder n_c -> n_{c-1}.
/// MassAction uses c * beta_n, matching the combinatorics of c independent
/// open gates. TabulatedVariant keeps the n3 -> n2 edge at 2 * beta_n, a
/// coefficient some published tables carry; it is provided for comparison
/// runs only.
enum class KScheme { MassAction, TabulatedVariant };

/// Stochastic Hodgkin-Huxley model whose conductance follows the fraction of
/// conducting channels. The jump kernel is sampled in two stages: first the
/// gate event (same categorical draw as the subunit model, on projected gate
/// counts), then the channel edge eligible for that event. The composite
/// probability of an edge is (edge rate * channel count) / total rate, the
/// same distribution the flat 28-edge kernel would give.
class ChannelModel {
public:
    using Mode = ChannelMode;

    explicit ChannelModel(HHParams params, KScheme scheme = KScheme::MassAction)
        : p_(params), scheme_(scheme), projection_(params),
          v_ceiling_(detail::reachable_voltages(params).high),
          global_bound_(detail::global_rate_bound_value(params)) {}

    const HHParams& params() const { return p_; }
    KScheme scheme() const { return scheme_; }

    /// Every sodium channel in (m0, h0), every potassium channel in n0.
    static Mode all_closed(const HHParams& p) {
        Mode m;
        m.na[0] = p.n_na;
        m.k[0] = p.n_k;
        return m;
    }
    Mode all_closed() const { return all_closed(p_); }

    bool valid_mode(const Mode& m) const {
        int na_total = 0;
        for (const int c : m.na) {
            if (c < 0) return false;
            na_total += c;
        }
        int k_total = 0;
        for (const int c : m.k) {
            if (c < 0) return false;
            k_total += c;
        }
        return na_total == p_.n_na && k_total == p_.n_k;
    }

    FlowCoeffs flow_coefficients(const Mode& m) const {
        const double g_na_eff = p_.g_na * static_cast<double>(m.conducting_na()) / p_.n_na;
        const double g_k_eff = p_.g_k * static_cast<double>(m.conducting_k()) / p_.n_k;
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
        double w[6];
        return event_weights(m, gate_rates(v), w);
    }

    Mode sample_kernel(const HybridState<Mode>& x, RngStream& rng) const {
        double w[6];
        const double total = event_weights(x.mode, gate_rates(x.voltage), w);
        if (!(total > 0.0)) throw ModelError("channel kernel invoked at zero jump rate");
        double u = rng.next_uniform() * total;
        int event = -1;
        for (int e = 0; e < 6; ++e) {
            if (w[e] <= 0.0) continue;
            event = e;
            u -= w[e];
            if (u <= 0.0) break;
        }
        return apply_gate_event(x.mode, event, rng);
    }

    /// Exact transition distribution: every reachable channel edge with its
    /// composite two-stage probability.
    std::vector<std::pair<Mode, double>> kernel_distribution(const Mode& m, double v) const {
        double w[6];
        const double total = event_weights(m, gate_rates(v), w);
        if (!(total > 0.0)) throw ModelError("channel kernel invoked at zero jump rate");
        std::vector<std::pair<Mode, double>> out;
        for (int e = 0; e < 6; ++e) {
            if (w[e] <= 0.0) continue;
            double branch[8];
            const int n_branch = branch_weights(m, e, branch);
            double branch_total = 0.0;
            for (int b = 0; b < n_branch; ++b) branch_total += branch[b];
            for (int b = 0; b < n_branch; ++b) {
                if (branch[b] <= 0.0) continue;
                out.emplace_back(apply_branch(m, e, b), (w[e] / total) * (branch[b] / branch_total));
            }
        }
        return out;
    }

    VoltageBounds voltage_bounds(const HybridState<Mode>& x, Window w) const {
        return detail::flow_voltage_bounds(flow_coefficients(x.mode), x.voltage, x.time, w,
                                           p_.pulse, p_.capacitance, v_ceiling_);
    }

    double rate_sup_from_bounds(const Mode& m, double v_low, double v_high) const {
        return projection_.rate_sup_from_bounds(eta(m), v_low, v_high);
    }

    double rate_inf_from_bounds(const Mode& m, double v_low, double v_high) const {
        return projection_.rate_inf_from_bounds(eta(m), v_low, v_high);
    }

    std::optional<double> global_rate_bound() const { return global_bound_; }

private:

    double k_closing_coeff(int state) const {
        if (scheme_ == KScheme::MassAction) return state;
        // Tabulated variant: 1, 2, 2, 4 for n1..n4.
        static constexpr double coeff[5] = {0.0, 1.0, 2.0, 2.0, 4.0};
        return coeff[state];
    }

    // Aggregate rate of each gate event. Event order matches the subunit
    // kernel: n opens, n closes, m opens, m closes, h opens, h closes.
    // Under mass-action closing this total equals the subunit rate at the
    // projected gate counts.
    double event_weights(const Mode& m, const GateRates& g, double (&w)[6]) const {
        const SubunitMode s = eta(m);
        double k_close_weight = 0.0;
        for (int state = 1; state <= 4; ++state) {
            k_close_weight += k_closing_coeff(state) * m.k[state];
        }
        w[0] = g.alpha_n * (p_.n_n() - s.open_n);
        w[1] = g.beta_n * k_close_weight;
        w[2] = g.alpha_m * (p_.n_m() - s.open_m);
        w[3] = g.beta_m * s.open_m;
        w[4] = g.alpha_h * (p_.n_h() - s.open_h);
        w[5] = g.beta_h * s.open_h;
        return w[0] + w[1] + w[2] + w[3] + w[4] + w[5];
    }

    // Channel edges eligible for one gate event, weighted by (multiplicity *
    // channel count). Sodium branches are indexed by j*4+i of the source
    // state, potassium by source state.
    int branch_weights(const Mode& m, int event, double (&w)[8]) const {
        switch (event) {
            case 0: // a gate n opens: n_c -> n_{c+1}, weight (4-c) per channel
                for (int c = 0; c < 4; ++c) w[c] = (4.0 - c) * m.k[c];
                return 4;
            case 1: // a gate n closes: n_c -> n_{c-1}
                for (int c = 1; c <= 4; ++c) w[c - 1] = k_closing_coeff(c) * m.k[c];
                return 4;
            case 2: // a gate m opens: (m_i, h_j) -> (m_{i+1}, h_j), weight 3-i
                for (int j = 0; j <= 1; ++j) {
                    for (int i = 0; i < 3; ++i) w[j * 3 + i] = (3.0 - i) * m.na[j * 4 + i];
                }
                return 6;
            case 3: // a gate m closes
                for (int j = 0; j <= 1; ++j) {
                    for (int i = 1; i <= 3; ++i) w[j * 3 + i - 1] = i * static_cast<double>(m.na[j * 4 + i]);
                }
                return 6;
            case 4: // the gate h opens: (m_i, h0) -> (m_i, h1)
                for (int i = 0; i <= 3; ++i) w[i] = m.na[i];
                return 4;
            case 5: // the gate h closes
                for (int i = 0; i <= 3; ++i) w[i] = m.na[4 + i];
                return 4;
        }
        throw ModelError("channel kernel drew an impossible gate event");
    }

    static Mode apply_branch(Mode m, int event, int branch) {
        switch (event) {
            case 0:
                --m.k[branch];
                ++m.k[branch + 1];
                return m;
            case 1:
                --m.k[branch + 1];
                ++m.k[branch];
                return m;
            case 2: {
                const int j = branch / 3;
                const int i = branch % 3;
                --m.na[j * 4 + i];
                ++m.na[j * 4 + i + 1];
                return m;
            }
            case 3: {
                const int j = branch / 3;
                const int i = branch % 3 + 1;
                --m.na[j * 4 + i];
                ++m.na[j * 4 + i - 1];
                return m;
            }
            case 4:
                --m.na[branch];
                ++m.na[4 + branch];
                return m;
            case 5:
                --m.na[4 + branch];
                ++m.na[branch];
                return m;
        }
        throw ModelError("channel kernel drew an impossible branch");
    }

    Mode apply_gate_event(const Mode& m, int event, RngStream& rng) const {
        if (event < 0) throw ModelError("channel kernel drew an impossible gate event");
        double w[8];
        const int n_branch = branch_weights(m, event, w);
        double total = 0.0;
        for (int b = 0; b < n_branch; ++b) total += w[b];
        if (!(total > 0.0)) {
            throw ModelError("no channel is eligible for the drawn gate event");
        }
        double u = rng.next_uniform() * total;
        int last_positive = -1;
        for (int b = 0; b < n_branch; ++b) {
            if (w[b] <= 0.0) continue;
            last_positive = b;
            u -= w[b];
            if (u <= 0.0) break;
        }
        return apply_branch(m, event, last_positive);
    }

    HHParams p_;
    KScheme scheme_;
    SubunitModel projection_; // the rate bounds factor through the gate counts
    double v_ceiling_;
    double global_bound_;
};

} // namespace pdmp::hh
