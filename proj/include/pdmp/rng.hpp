#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace pdmp {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl64(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

} // namespace detail

/// Deterministic uniform stream keyed by (seed, stream_id).
///
/// Monte Carlo trials use one master seed and stream_id = trial index, so
/// runs are reproducible and independent of execution order. The generator
/// is xoshiro256++ with its state derived from both keys through splitmix64,
/// which keeps neighbouring stream ids in unrelated states.
class RngStream {
public:
    RngStream() : RngStream(0, 0) {}

    RngStream(std::uint64_t seed, std::uint64_t stream_id)
        : seed_(seed), stream_id_(stream_id) {
        std::uint64_t a = seed;
        std::uint64_t b = stream_id ^ 0x5851f42d4c957f2dULL;
        std::uint64_t key = detail::splitmix64(a) ^ (detail::splitmix64(b) * 0xda942042e4dd58b5ULL);
        for (auto& word : state_) word = detail::splitmix64(key);
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    std::uint64_t next_bits() {
        const std::uint64_t result = detail::rotl64(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = detail::rotl64(state_[3], 45);
        return result;
    }

    /// Uniform draw strictly inside (0,1). The 53-bit grid never produces 1.0
    /// and zero is rejected, so -log(u) is always finite.
    double next_uniform() {
        double u;
        do {
            u = static_cast<double>(next_bits() >> 11) * 0x1.0p-53;
        } while (u <= 0.0);
        return u;
    }

    /// Unit-exponential draw, -log U.
    double next_exponential() { return -std::log(next_uniform()); }

    /// Uniform integer in [0, n).
    std::uint64_t next_below(std::uint64_t n) {
        // Lemire-style rejection to avoid modulo bias.
        std::uint64_t x = next_bits();
        __uint128_t m = static_cast<__uint128_t>(x) * n;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            const std::uint64_t threshold = -n % n;
            while (lo < threshold) {
                x = next_bits();
                m = static_cast<__uint128_t>(x) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::array<std::uint64_t, 4> state_{};
};

} // namespace pdmp
