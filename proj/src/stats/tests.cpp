#include "pdmp/stats/tests.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pdmp::stats {

namespace {

// Lower-gamma series, valid for x < a + 1.
double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper-gamma continued fraction (modified Lentz), valid for x >= a + 1.
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

} // namespace

double regularized_gamma_q(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw std::invalid_argument("regularized_gamma_q domain");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double chi_square_sf(double statistic, double dof) {
    if (statistic <= 0.0) return 1.0;
    if (!std::isfinite(statistic)) return 0.0;
    return regularized_gamma_q(dof / 2.0, statistic / 2.0);
}

double kolmogorov_sf(double x) {
    if (x <= 0.0) return 1.0;
    if (x > 8.0) return 0.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 200; ++k) {
        const double term = std::exp(-2.0 * k * k * x * x);
        sum += sign * term;
        if (term < 1e-18) break;
        sign = -sign;
    }
    return std::min(1.0, std::max(0.0, 2.0 * sum));
}

KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) return {0.0, 1.0};
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        const double hi = (static_cast<double>(i) + 1.0) / n - f;
        const double lo = f - static_cast<double>(i) / n;
        d = std::max({d, hi, lo});
    }
    const double sqrt_n = std::sqrt(n);
    // Stephens' small-sample correction on top of the asymptotic law.
    const double p = kolmogorov_sf((sqrt_n + 0.12 + 0.11 / sqrt_n) * d);
    return {d, p};
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) return {0.0, 1.0};
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    double d = 0.0;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    const double n_eff = na * nb / (na + nb);
    const double sqrt_n = std::sqrt(n_eff);
    const double p = kolmogorov_sf((sqrt_n + 0.12 + 0.11 / sqrt_n) * d);
    return {d, p};
}

ChiSquareResult chi_square_gof(const std::vector<std::uint64_t>& counts,
                               const std::vector<double>& probs, double min_expected) {
    if (counts.size() != probs.size()) {
        throw std::invalid_argument("chi_square_gof: counts/probs size mismatch");
    }
    std::uint64_t total = 0;
    for (const auto c : counts) total += c;
    if (total == 0) throw std::invalid_argument("chi_square_gof: empty sample");
    const double n = static_cast<double>(total);

    double prob_mass = 0.0;
    for (const double p : probs) prob_mass += p;
    const double tail_prob = std::max(0.0, 1.0 - prob_mass);
    const double tail_expected = n * tail_prob;

    // Pool adjacent cells until each bin carries enough expected mass; the
    // remainder (including the implicit tail) forms the final bin.
    ChiSquareResult out;
    double chi2 = 0.0;
    std::size_t bins = 0;
    double acc_obs = 0.0;
    double acc_exp = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        acc_obs += static_cast<double>(counts[i]);
        acc_exp += n * probs[i];
        if (acc_exp >= min_expected) {
            const double diff = acc_obs - acc_exp;
            chi2 += diff * diff / acc_exp;
            ++bins;
            acc_obs = 0.0;
            acc_exp = 0.0;
        }
    }
    // Leftover cells plus the implicit tail form the final bin.
    acc_exp += tail_expected;
    if (acc_exp > 0.0) {
        const double diff = acc_obs - acc_exp;
        chi2 += diff * diff / acc_exp;
        ++bins;
    } else if (acc_obs > 0.0) {
        chi2 = std::numeric_limits<double>::infinity(); // observed an impossible category
        ++bins;
    }
    if (bins < 2) throw std::invalid_argument("chi_square_gof: fewer than two bins");
    out.statistic = chi2;
    out.bins = bins;
    out.dof = static_cast<double>(bins - 1);
    out.p_value = chi_square_sf(chi2, out.dof);
    return out;
}

std::vector<double> poisson_pmf(double mean, std::size_t max_count) {
    std::vector<double> pmf(max_count + 1);
    double p = std::exp(-mean);
    pmf[0] = p;
    for (std::size_t k = 1; k <= max_count; ++k) {
        p *= mean / static_cast<double>(k);
        pmf[k] = p;
    }
    return pmf;
}

std::vector<double> binomial_pmf(int n, double p) {
    std::vector<double> pmf(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) {
        const double log_choose =
            std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
        pmf[static_cast<std::size_t>(k)] =
            std::exp(log_choose + k * std::log(p) + (n - k) * std::log1p(-p));
    }
    return pmf;
}

} // namespace pdmp::stats
