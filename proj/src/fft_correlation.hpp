#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qcorr::detail {

/// c[l] = sum_t a_t b_{t+l} for l in [-max_lag, max_lag], returned in lag order.
/// Inputs must have equal length; terms outside the series are zero.
std::vector<double> fft_cross_correlation(std::span<const double> a, std::span<const double> b,
                                          std::size_t max_lag);

}  // namespace qcorr::detail
