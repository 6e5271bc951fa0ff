#pragma once

#include <cmath>
#include <cstddef>

namespace pdmp::stats {

/// Welford running mean/variance.
class RunningStat {
public:
    void add(double x) {
        ++n_;
        const double delta = x - mean_;
        mean_ += delta / static_cast<double>(n_);
        m2_ += delta * (x - mean_);
    }

    std::size_t count() const { return n_; }
    double mean() const { return mean_; }

    double variance() const {
        return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
    }

    double std_dev() const { return std::sqrt(variance()); }

    /// Standard error of the mean.
    double std_error() const {
        return n_ > 0 ? std_dev() / std::sqrt(static_cast<double>(n_)) : 0.0;
    }

private:
    std::size_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

} // namespace pdmp::stats
