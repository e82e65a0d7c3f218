#pragma once

// Quantile-based correlation functions.
//
// A series x is mapped to binary indicator series xi(p)_t = [x_t <= q_p] for
// the empirical p-quantile q_p, and the lagged cross-correlation of two such
// indicator series is the quantile correlation function (qcf).

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qcorr/series.hpp"

namespace qcorr {

/// Indicator series obtained by thresholding at an empirical quantile.
struct BinarySeries {
    std::vector<std::uint8_t> bits;
    ProbabilityLevel level{0.0};
    double achieved_fraction = 0.0;  // ones / length
    double quantile_value = 0.0;     // threshold the bits were computed against

    std::size_t size() const noexcept { return bits.size(); }

    /// Bitwise NOT; level and quantile are carried over, the fraction is 1 - f.
    BinarySeries complement() const;
};

/// qcf values on a signed lag grid.
struct QcfCurve {
    ProbabilityLevel alpha{0.0};
    ProbabilityLevel beta{0.0};
    std::vector<int> lags;      // strictly increasing
    std::vector<double> values;  // one per lag
    std::optional<double> ci_half_width;
    std::size_t series_length = 0;
    std::size_t n_averaged = 1;

    /// Value at `lag`; throws InvalidArgument when the lag is not on the grid.
    double at(int lag) const;
    bool has_lag(int lag) const noexcept;
};

/// qcf values over a grid of quantile pairs at one lag.
struct PPGrid {
    int lag = 0;
    std::vector<ProbabilityLevel> levels;
    std::vector<double> matrix;  // row-major, rows = alpha index, cols = beta index
    std::size_t series_length = 0;
    std::size_t n_averaged = 1;

    std::size_t dim() const noexcept { return levels.size(); }
    double operator()(std::size_t row, std::size_t col) const { return matrix[row * dim() + col]; }
};

struct AsymmetryReport {
    double area_neg = 0.0;  // sum of |qcf| over lags -1..-L
    double area_pos = 0.0;  // sum of |qcf| over lags 1..L
    double delta = 0.0;     // (area_neg - area_pos) / (area_neg + area_pos)
    int max_lag = 0;
    bool zero_area = false;  // both areas vanished; delta reported as 0
};

/// Order statistic x_(ceil(p*T)) of the sorted values; p = 0 yields the minimum.
double empirical_quantile(std::span<const double> x, ProbabilityLevel p);
double empirical_quantile(const TimeSeries& x, ProbabilityLevel p);

/// 1-based rank ceil(p*n) clamped to [1, n]. Products within 1e-9 of an
/// integer snap to it so that decimal levels such as 0.15 behave as written.
std::size_t quantile_rank(std::size_t n, double p);

BinarySeries filter_series(std::span<const double> x, ProbabilityLevel p);
BinarySeries filter_series(const TimeSeries& x, ProbabilityLevel p);

/// Lagged correlation of two indicator series for lags -max_lag..max_lag,
/// evaluated directly in O(T * max_lag).
///
/// For l >= 0 the value is (1/T) sum_{t<T-l} (a_t - m_a)(b_{t+l} - m_b) / (s_a s_b)
/// with full-series means and population deviations; negative lags use
/// qcf_{-l}(a, b) = qcf_l(b, a).
QcfCurve cross_qcf(const BinarySeries& a, const BinarySeries& b, int max_lag);

/// Same quantity as cross_qcf through FFT-based cross-correlation.
QcfCurve cross_qcf_fast(const BinarySeries& a, const BinarySeries& b, int max_lag);

/// Single-lag evaluation of the same estimator.
double cross_qcf_at(const BinarySeries& a, const BinarySeries& b, int lag);

QcfCurve qcf(const TimeSeries& x, ProbabilityLevel alpha, ProbabilityLevel beta, int max_lag);
QcfCurve qcf_fast(const TimeSeries& x, ProbabilityLevel alpha, ProbabilityLevel beta, int max_lag);

/// Pointwise mean in input order. All curves must share (alpha, beta) and lags.
QcfCurve average_curves(std::span<const QcfCurve> curves);

/// 1.96 times the root mean square of the nonzero-lag values of a (0.5, 0.5) curve.
double confidence_band(const QcfCurve& reference);

/// Normalized area difference between negative and positive lags.
/// `max_lag` defaults to the curve's own range.
AsymmetryReport asymmetry(const QcfCurve& curve, std::optional<int> max_lag = std::nullopt);

/// Mirror lag axis: value(l) -> value(-l).
QcfCurve mirrored(const QcfCurve& curve);

PPGrid pp_grid(const TimeSeries& x, std::span<const ProbabilityLevel> levels, int lag);

/// Entrywise mean of grids sharing lag and levels.
PPGrid average_grids(std::span<const PPGrid> grids);

/// Levels 0.05, 0.10, ..., 0.95.
std::vector<ProbabilityLevel> default_pp_levels();

}  // namespace qcorr
