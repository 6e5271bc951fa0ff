#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pdmp {

// Closed-form evaluation produced a non-finite value (overflow or bad input).
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The requested bound strategy cannot produce a finite envelope for this model.
struct UnsupportedStrategyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The envelope has finite total mass: no candidate time exists beyond it.
struct InfiniteHorizonError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A model broke its own contract (malformed kernel weights, invalid mode, ...).
struct ModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The thinning loop exceeded the per-interval proposal cap. This signals a
// mis-built envelope or a pathological partition width, not a valid outcome,
// so the partial counts are carried along for diagnosis.
class ProposalCapError : public std::runtime_error {
public:
    ProposalCapError(const std::string& what, std::uint64_t proposed, std::uint64_t accepted)
        : std::runtime_error(what), proposed_so_far(proposed), accepted_so_far(accepted) {}

    std::uint64_t proposed_so_far = 0;
    std::uint64_t accepted_so_far = 0;
};

// Every Monte Carlo trial was empty; the requested estimator is undefined.
struct DegenerateReportError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace pdmp
