#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "pdmp/numeric/compensated.hpp"
#include "pdmp/numeric/quadrature.hpp"
#include "pdmp/rng.hpp"
#include "pdmp/stats/accumulators.hpp"
#include "pdmp/stats/tests.hpp"

using namespace pdmp;

TEST_CASE("regularized upper gamma matches closed forms") {
    // Q(1, x) = e^{-x}
    for (const double x : {0.1, 0.5, 1.0, 3.0, 10.0}) {
        CHECK(stats::regularized_gamma_q(1.0, x) == doctest::Approx(std::exp(-x)).epsilon(1e-12));
    }
    // Q(1/2, x) = erfc(sqrt(x))
    for (const double x : {0.2, 1.0, 2.5, 7.0}) {
        CHECK(stats::regularized_gamma_q(0.5, x) ==
              doctest::Approx(std::erfc(std::sqrt(x))).epsilon(1e-10));
    }
    // chi-square with two degrees of freedom is exponential
    CHECK(stats::chi_square_sf(4.0, 2.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
}

TEST_CASE("kolmogorov survival function reference points") {
    // Classical critical values: Q(1.3581) ~ 0.05, Q(1.6276) ~ 0.01.
    CHECK(stats::kolmogorov_sf(1.3581) == doctest::Approx(0.05).epsilon(2e-3));
    CHECK(stats::kolmogorov_sf(1.6276) == doctest::Approx(0.01).epsilon(2e-2));
    CHECK(stats::kolmogorov_sf(0.0) == 1.0);
    CHECK(stats::kolmogorov_sf(10.0) == 0.0);
}

TEST_CASE("one-sample KS accepts matching and rejects mismatched distributions") {
    RngStream rng(1000, 0);
    std::vector<double> uniform;
    for (int i = 0; i < 50'000; ++i) uniform.push_back(rng.next_uniform());
    const auto ok = stats::ks_test(uniform, [](double x) { return std::clamp(x, 0.0, 1.0); });
    CHECK(ok.p_value > 0.01);
    const auto bad = stats::ks_test(uniform, [](double x) {
        const double c = std::clamp(x, 0.0, 1.0);
        return c * c; // wrong law
    });
    CHECK(bad.p_value < 1e-6);
}

TEST_CASE("two-sample KS distinguishes shifted samples") {
    RngStream rng(1001, 0);
    std::vector<double> a;
    std::vector<double> b;
    std::vector<double> c;
    for (int i = 0; i < 20'000; ++i) {
        a.push_back(rng.next_exponential());
        b.push_back(rng.next_exponential());
        c.push_back(rng.next_exponential() * 1.1);
    }
    CHECK(stats::ks_two_sample(a, b).p_value > 0.01);
    CHECK(stats::ks_two_sample(a, c).p_value < 1e-4);
}

TEST_CASE("chi-square goodness of fit on a fair and a loaded die") {
    RngStream rng(1002, 0);
    std::vector<std::uint64_t> fair(6, 0);
    std::vector<std::uint64_t> loaded(6, 0);
    for (int i = 0; i < 60'000; ++i) {
        ++fair[rng.next_below(6)];
        const auto u = rng.next_uniform();
        ++loaded[u < 0.22 ? 0 : rng.next_below(6)];
    }
    const std::vector<double> probs(6, 1.0 / 6.0);
    CHECK(stats::chi_square_gof(fair, probs).p_value > 0.01);
    CHECK(stats::chi_square_gof(loaded, probs).p_value < 1e-8);
}

TEST_CASE("pmf helpers sum to one") {
    const auto pois = stats::poisson_pmf(20.0, 120);
    CHECK(std::accumulate(pois.begin(), pois.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    const auto binom = stats::binomial_pmf(17, 0.37);
    CHECK(std::accumulate(binom.begin(), binom.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("adaptive quadrature reaches the requested accuracy") {
    const double got = numeric::adaptive_simpson([](double x) { return std::sin(x); }, 0.0, 3.0, 1e-12);
    CHECK(got == doctest::Approx(1.0 - std::cos(3.0)).epsilon(1e-12));
    const double sin2 = numeric::adaptive_simpson(
        [](double t) { return 1.0 + std::sin(t) * std::sin(t); }, 0.0, 10.0, 1e-12);
    CHECK(sin2 == doctest::Approx(15.0 - std::sin(20.0) / 4.0).epsilon(1e-12));
}

TEST_CASE("compensated summation absorbs catastrophic cancellation") {
    CompensatedSum sum;
    sum.add(1.0);
    for (int i = 0; i < 10'000'000; ++i) sum.add(1e-16);
    CHECK(sum.value() == doctest::Approx(1.0 + 1e-9).epsilon(1e-12));
}

TEST_CASE("running stat matches closed-form moments") {
    stats::RunningStat st;
    for (int i = 1; i <= 5; ++i) st.add(i);
    CHECK(st.mean() == doctest::Approx(3.0));
    CHECK(st.variance() == doctest::Approx(2.5));
    CHECK(st.std_error() == doctest::Approx(std::sqrt(2.5 / 5.0)));
}
