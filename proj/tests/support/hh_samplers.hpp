#pragma once

// Random-but-reproducible HH states for property tests.

#include "pdmp/hh/channel.hpp"
#include "pdmp/hh/subunit.hpp"
#include "pdmp/rng.hpp"

namespace testsupport {

inline pdmp::hh::SubunitMode random_subunit_mode(const pdmp::hh::HHParams& p,
                                                 pdmp::RngStream& rng) {
    pdmp::hh::SubunitMode m;
    m.open_n = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(p.n_n()) + 1));
    m.open_m = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(p.n_m()) + 1));
    m.open_h = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(p.n_h()) + 1));
    return m;
}

inline pdmp::hh::ChannelMode random_channel_mode(const pdmp::hh::HHParams& p,
                                                 pdmp::RngStream& rng) {
    pdmp::hh::ChannelMode m;
    for (int c = 0; c < p.n_na; ++c) {
        ++m.na[rng.next_below(8)];
    }
    for (int c = 0; c < p.n_k; ++c) {
        ++m.k[rng.next_below(5)];
    }
    return m;
}

inline double random_voltage(pdmp::RngStream& rng, double lo = -12.0, double hi = 115.0) {
    return lo + (hi - lo) * rng.next_uniform();
}

} // namespace testsupport
