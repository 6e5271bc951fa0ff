#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace pdmp::stats {

/// Regularized upper incomplete gamma Q(a, x).
double regularized_gamma_q(double a, double x);

/// Survival function of a chi-square variable with `dof` degrees of freedom.
double chi_square_sf(double statistic, double dof);

/// Asymptotic Kolmogorov survival function, 2 * sum_k (-1)^{k-1} e^{-2 k^2 x^2}.
double kolmogorov_sf(double x);

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

/// One-sample Kolmogorov-Smirnov test against a continuous CDF.
KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Two-sample Kolmogorov-Smirnov test.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

struct ChiSquareResult {
    double statistic = 0.0;
    double dof = 0.0;
    double p_value = 1.0;
    std::size_t bins = 0;
};

/// Goodness of fit of observed category counts against expected
/// probabilities. Adjacent cells are pooled until every bin's expected count
/// reaches min_expected; probabilities may sum to less than one, in which
/// case an implicit tail cell absorbs the remainder.
ChiSquareResult chi_square_gof(const std::vector<std::uint64_t>& counts,
                               const std::vector<double>& probs, double min_expected = 5.0);

/// Poisson probabilities 0..max_count (the tail beyond max_count is left to
/// the implicit cell of chi_square_gof).
std::vector<double> poisson_pmf(double mean, std::size_t max_count);

/// Binomial(n, p) probabilities 0..n.
std::vector<double> binomial_pmf(int n, double p);

} // namespace pdmp::stats
