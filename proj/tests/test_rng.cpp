#include <doctest.h>

#include <set>
#include <vector>

#include "pdmp/rng.hpp"

using pdmp::RngStream;

TEST_CASE("identical keys reproduce the identical sequence") {
    RngStream a(123456789, 42);
    RngStream b(123456789, 42);
    for (int i = 0; i < 1000; ++i) {
        REQUIRE(a.next_bits() == b.next_bits());
    }
    RngStream c(123456789, 42);
    RngStream d(123456789, 42);
    for (int i = 0; i < 1000; ++i) {
        REQUIRE(c.next_uniform() == d.next_uniform());
    }
}

TEST_CASE("uniform draws stay strictly inside (0,1) and average to one half") {
    RngStream rng(7, 0);
    double sum = 0.0;
    constexpr int n = 1'000'000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.next_uniform();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    const double mean = sum / n;
    CHECK(mean > 0.497);
    CHECK(mean < 0.503);
}

TEST_CASE("distinct stream ids share no prefix") {
    constexpr int streams = 64;
    constexpr int prefix = 8;
    std::set<std::vector<std::uint64_t>> prefixes;
    for (int s = 0; s < streams; ++s) {
        RngStream rng(99, static_cast<std::uint64_t>(s));
        std::vector<std::uint64_t> head;
        head.reserve(prefix);
        for (int i = 0; i < prefix; ++i) head.push_back(rng.next_bits());
        prefixes.insert(std::move(head));
    }
    CHECK(prefixes.size() == streams);
}

TEST_CASE("adjacent streams look uncorrelated at the bit level") {
    // Crude independence smoke test: the XOR of paired draws from adjacent
    // streams should be roughly balanced in every bit position.
    RngStream a(2024, 0);
    RngStream b(2024, 1);
    constexpr int n = 20'000;
    int ones[64] = {};
    for (int i = 0; i < n; ++i) {
        std::uint64_t x = a.next_bits() ^ b.next_bits();
        for (int bit = 0; bit < 64; ++bit) {
            ones[bit] += static_cast<int>((x >> bit) & 1U);
        }
    }
    for (int bit = 0; bit < 64; ++bit) {
        // 6 sigma around n/2 with sigma = sqrt(n)/2 ~ 70.7
        CHECK(ones[bit] > n / 2 - 425);
        CHECK(ones[bit] < n / 2 + 425);
    }
}

TEST_CASE("next_below is unbiased over small ranges") {
    RngStream rng(5, 5);
    int counts[7] = {};
    constexpr int n = 70'000;
    for (int i = 0; i < n; ++i) ++counts[rng.next_below(7)];
    for (const int c : counts) {
        CHECK(c > 10000 - 500);
        CHECK(c < 10000 + 500);
    }
}
