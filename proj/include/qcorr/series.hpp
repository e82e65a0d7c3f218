#pragma once

#include <span>
#include <string>
#include <vector>

namespace qcorr {

/// Probability level in [0, 1]. Construction validates the range.
class ProbabilityLevel {
public:
    explicit ProbabilityLevel(double p);

    double value() const noexcept { return p_; }

    friend bool operator==(const ProbabilityLevel&, const ProbabilityLevel&) = default;

private:
    double p_;
};

/// Ordered finite observations with a nominal sampling step.
///
/// Invariants: at least two values, all finite, step > 0.
class TimeSeries {
public:
    explicit TimeSeries(std::vector<double> values, double step = 1.0, std::string label = {});

    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    double step() const noexcept { return step_; }
    const std::string& label() const noexcept { return label_; }

    friend bool operator==(const TimeSeries&, const TimeSeries&) = default;

private:
    std::vector<double> values_;
    double step_;
    std::string label_;
};

}  // namespace qcorr
