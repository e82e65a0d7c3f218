#include "qcorr/series.hpp"

#include <cmath>

#include "qcorr/error.hpp"

namespace qcorr {

ProbabilityLevel::ProbabilityLevel(double p) : p_(p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw InvalidArgument("probability level must lie in [0, 1], got " + std::to_string(p));
    }
}

TimeSeries::TimeSeries(std::vector<double> values, double step, std::string label)
    : values_(std::move(values)), step_(step), label_(std::move(label)) {
    if (values_.size() < 2) {
        throw InvalidArgument("time series needs at least 2 observations");
    }
    if (!(step_ > 0.0) || !std::isfinite(step_)) {
        throw InvalidArgument("time series step must be positive");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw InvalidArgument("non-finite value at index " + std::to_string(i));
        }
    }
}

}  // namespace qcorr
