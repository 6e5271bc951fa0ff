#pragma once

#include <cmath>

namespace pdmp {

/// Neumaier-compensated accumulator. Used wherever many small increments
/// feed a running total whose inverse must stay accurate (envelope mass,
/// Monte Carlo merges).
class CompensatedSum {
public:
    CompensatedSum() = default;
    explicit CompensatedSum(double initial) : sum_(initial) {}

    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            carry_ += (sum_ - t) + x;
        } else {
            carry_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    double value() const { return sum_ + carry_; }

    void reset(double initial = 0.0) {
        sum_ = initial;
        carry_ = 0.0;
    }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

} // namespace pdmp
