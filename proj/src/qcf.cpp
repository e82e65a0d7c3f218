#include "qcorr/qcf.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qcorr/error.hpp"
#include "fft_correlation.hpp"

namespace qcorr {

namespace {

struct Centered {
    std::vector<double> dev;
    double sum_sq = 0.0;
};

Centered center(const BinarySeries& s) {
    const auto n = s.bits.size();
    std::size_t ones = 0;
    for (auto b : s.bits) ones += b;
    if (ones == 0 || ones == n) {
        throw DegenerateLevel("degenerate quantile level p=" + std::to_string(s.level.value()) +
                              ": filtered series is constant");
    }
    const double mean = static_cast<double>(ones) / static_cast<double>(n);
    Centered c;
    c.dev.resize(n);
    for (std::size_t t = 0; t < n; ++t) c.dev[t] = static_cast<double>(s.bits[t]) - mean;
    // Same summation as the lag-0 cross term so that an autocorrelation is exactly 1 there.
    for (std::size_t t = 0; t < n; ++t) c.sum_sq += c.dev[t] * c.dev[t];
    return c;
}

// sum_{t < n-lag} a_t b_{t+lag}, lag >= 0
double lagged_dot(const std::vector<double>& a, const std::vector<double>& b, std::size_t lag) {
    const std::size_t n = a.size();
    double s = 0.0;
    for (std::size_t t = 0; t + lag < n; ++t) s += a[t] * b[t + lag];
    return s;
}

void check_pair(const BinarySeries& a, const BinarySeries& b, int max_lag) {
    if (a.size() != b.size()) {
        throw InvalidArgument("filtered series differ in length");
    }
    if (a.size() == 0) {
        throw InvalidArgument("empty input");
    }
    if (max_lag < 0 || 2 * static_cast<std::size_t>(max_lag) >= a.size()) {
        throw InvalidArgument("max_lag " + std::to_string(max_lag) + " must satisfy 0 <= max_lag < T/2 with T=" +
                              std::to_string(a.size()));
    }
}

std::vector<int> lag_grid(int max_lag) {
    std::vector<int> lags(2 * static_cast<std::size_t>(max_lag) + 1);
    for (int i = 0; i < static_cast<int>(lags.size()); ++i) lags[i] = i - max_lag;
    return lags;
}

}  // namespace

BinarySeries BinarySeries::complement() const {
    BinarySeries out = *this;
    for (auto& b : out.bits) b = static_cast<std::uint8_t>(1 - b);
    out.achieved_fraction = 1.0 - achieved_fraction;
    return out;
}

bool QcfCurve::has_lag(int lag) const noexcept {
    return std::binary_search(lags.begin(), lags.end(), lag);
}

double QcfCurve::at(int lag) const {
    auto it = std::lower_bound(lags.begin(), lags.end(), lag);
    if (it == lags.end() || *it != lag) {
        throw InvalidArgument("lag " + std::to_string(lag) + " not on curve grid");
    }
    return values[static_cast<std::size_t>(it - lags.begin())];
}

std::size_t quantile_rank(std::size_t n, double p) {
    const double r = p * static_cast<double>(n);
    const double nearest = std::round(r);
    double k = std::abs(r - nearest) <= 1e-9 * std::max(1.0, r) ? nearest : std::ceil(r);
    k = std::clamp(k, 1.0, static_cast<double>(n));
    return static_cast<std::size_t>(k);
}

double empirical_quantile(std::span<const double> x, ProbabilityLevel p) {
    if (x.empty()) throw InvalidArgument("empty input");
    std::vector<double> v(x.begin(), x.end());
    const auto k = quantile_rank(v.size(), p.value());
    auto nth = v.begin() + static_cast<std::ptrdiff_t>(k - 1);
    std::nth_element(v.begin(), nth, v.end());
    return *nth;
}

double empirical_quantile(const TimeSeries& x, ProbabilityLevel p) {
    return empirical_quantile(x.values(), p);
}

BinarySeries filter_series(std::span<const double> x, ProbabilityLevel p) {
    const double q = empirical_quantile(x, p);
    BinarySeries out;
    out.level = p;
    out.quantile_value = q;
    out.bits.resize(x.size());
    std::size_t ones = 0;
    for (std::size_t t = 0; t < x.size(); ++t) {
        const bool below = x[t] <= q;
        out.bits[t] = below ? 1 : 0;
        ones += below;
    }
    out.achieved_fraction = static_cast<double>(ones) / static_cast<double>(x.size());
    return out;
}

BinarySeries filter_series(const TimeSeries& x, ProbabilityLevel p) {
    return filter_series(x.values(), p);
}

QcfCurve cross_qcf(const BinarySeries& a, const BinarySeries& b, int max_lag) {
    check_pair(a, b, max_lag);
    const auto ca = center(a);
    const auto cb = center(b);
    const double norm = std::sqrt(ca.sum_sq * cb.sum_sq);

    QcfCurve curve{a.level, b.level, lag_grid(max_lag), {}, std::nullopt, a.size(), 1};
    curve.values.resize(curve.lags.size());
    for (std::size_t i = 0; i < curve.lags.size(); ++i) {
        const int lag = curve.lags[i];
        const double s = lag >= 0 ? lagged_dot(ca.dev, cb.dev, static_cast<std::size_t>(lag))
                                  : lagged_dot(cb.dev, ca.dev, static_cast<std::size_t>(-lag));
        curve.values[i] = s / norm;
    }
    return curve;
}

double cross_qcf_at(const BinarySeries& a, const BinarySeries& b, int lag) {
    check_pair(a, b, std::abs(lag));
    const auto ca = center(a);
    const auto cb = center(b);
    const double s = lag >= 0 ? lagged_dot(ca.dev, cb.dev, static_cast<std::size_t>(lag))
                              : lagged_dot(cb.dev, ca.dev, static_cast<std::size_t>(-lag));
    return s / std::sqrt(ca.sum_sq * cb.sum_sq);
}

QcfCurve cross_qcf_fast(const BinarySeries& a, const BinarySeries& b, int max_lag) {
    check_pair(a, b, max_lag);
    const auto ca = center(a);
    const auto cb = center(b);
    const double norm = std::sqrt(ca.sum_sq * cb.sum_sq);
    const auto raw = detail::fft_cross_correlation(ca.dev, cb.dev, static_cast<std::size_t>(max_lag));

    QcfCurve curve{a.level, b.level, lag_grid(max_lag), {}, std::nullopt, a.size(), 1};
    curve.values.resize(curve.lags.size());
    for (std::size_t i = 0; i < raw.size(); ++i) curve.values[i] = raw[i] / norm;

    if (a.bits == b.bits) {
        // Autocorrelation: enforce the exact lag symmetry and unit lag-0 value.
        const auto mid = static_cast<std::size_t>(max_lag);
        curve.values[mid] = 1.0;
        for (std::size_t k = 1; k <= mid; ++k) curve.values[mid - k] = curve.values[mid + k];
    }
    return curve;
}

QcfCurve qcf(const TimeSeries& x, ProbabilityLevel alpha, ProbabilityLevel beta, int max_lag) {
    const auto a = filter_series(x, alpha);
    if (alpha == beta) return cross_qcf(a, a, max_lag);
    return cross_qcf(a, filter_series(x, beta), max_lag);
}

QcfCurve qcf_fast(const TimeSeries& x, ProbabilityLevel alpha, ProbabilityLevel beta, int max_lag) {
    const auto a = filter_series(x, alpha);
    if (alpha == beta) return cross_qcf_fast(a, a, max_lag);
    return cross_qcf_fast(a, filter_series(x, beta), max_lag);
}

QcfCurve average_curves(std::span<const QcfCurve> curves) {
    if (curves.empty()) throw InvalidArgument("no curves to average");
    const auto& first = curves.front();
    QcfCurve out = first;
    out.values.assign(first.values.size(), 0.0);
    for (const auto& c : curves) {
        if (!(c.alpha == first.alpha) || !(c.beta == first.beta)) {
            throw InvalidArgument("cannot average curves with different quantile pairs");
        }
        if (c.lags != first.lags) {
            throw InvalidArgument("cannot average curves with different lag grids");
        }
        if (c.ci_half_width != first.ci_half_width) out.ci_half_width.reset();
        out.series_length = std::min(out.series_length, c.series_length);
        for (std::size_t i = 0; i < c.values.size(); ++i) out.values[i] += c.values[i];
    }
    const double n = static_cast<double>(curves.size());
    for (auto& v : out.values) v /= n;
    out.n_averaged = curves.size();
    return out;
}

double confidence_band(const QcfCurve& reference) {
    if (reference.alpha.value() != 0.5 || reference.beta.value() != 0.5) {
        throw InvalidArgument("confidence band reference must be the (0.5, 0.5) curve");
    }
    double sum_sq = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < reference.lags.size(); ++i) {
        if (reference.lags[i] == 0) continue;
        sum_sq += reference.values[i] * reference.values[i];
        ++count;
    }
    if (count == 0) throw InvalidArgument("confidence band reference has no nonzero lags");
    return 1.96 * std::sqrt(sum_sq / static_cast<double>(count));
}

AsymmetryReport asymmetry(const QcfCurve& curve, std::optional<int> max_lag) {
    if (curve.lags.empty() || curve.lags.front() != -curve.lags.back() ||
        curve.lags.size() != 2 * static_cast<std::size_t>(curve.lags.back()) + 1) {
        throw InvalidArgument("asymmetry needs a contiguous symmetric lag grid [-L, L]");
    }
    const int range = curve.lags.back();
    const int limit = max_lag.value_or(range);
    if (limit < 1 || limit > range) {
        throw InvalidArgument("asymmetry max_lag must lie in [1, " + std::to_string(range) + "]");
    }
    AsymmetryReport r;
    r.max_lag = limit;
    const auto mid = static_cast<std::size_t>(range);
    for (int l = 1; l <= limit; ++l) {
        r.area_neg += std::abs(curve.values[mid - static_cast<std::size_t>(l)]);
        r.area_pos += std::abs(curve.values[mid + static_cast<std::size_t>(l)]);
    }
    const double total = r.area_neg + r.area_pos;
    if (total > 0.0) {
        r.delta = (r.area_neg - r.area_pos) / total;
    } else {
        r.zero_area = true;
    }
    return r;
}

QcfCurve mirrored(const QcfCurve& curve) {
    QcfCurve out = curve;
    std::reverse(out.values.begin(), out.values.end());
    for (auto& l : out.lags) l = -l;
    std::reverse(out.lags.begin(), out.lags.end());
    std::swap(out.alpha, out.beta);
    return out;
}

PPGrid pp_grid(const TimeSeries& x, std::span<const ProbabilityLevel> levels, int lag) {
    if (levels.empty()) throw InvalidArgument("pp grid needs at least one level");
    for (const auto& p : levels) {
        if (!(p.value() > 0.0 && p.value() < 1.0)) {
            throw InvalidArgument("pp grid levels must lie strictly inside (0, 1)");
        }
    }
    if (2 * static_cast<std::size_t>(std::abs(lag)) >= x.size()) {
        throw InvalidArgument("|lag| must be below T/2");
    }
    std::vector<BinarySeries> filtered;
    filtered.reserve(levels.size());
    for (const auto& p : levels) filtered.push_back(filter_series(x, p));

    PPGrid grid;
    grid.lag = lag;
    grid.levels.assign(levels.begin(), levels.end());
    grid.series_length = x.size();
    grid.matrix.resize(levels.size() * levels.size());
    for (std::size_t i = 0; i < levels.size(); ++i) {
        for (std::size_t j = 0; j < levels.size(); ++j) {
            grid.matrix[i * levels.size() + j] = cross_qcf_at(filtered[i], filtered[j], lag);
        }
    }
    return grid;
}

PPGrid average_grids(std::span<const PPGrid> grids) {
    if (grids.empty()) throw InvalidArgument("no grids to average");
    PPGrid out = grids.front();
    std::fill(out.matrix.begin(), out.matrix.end(), 0.0);
    for (const auto& g : grids) {
        if (g.lag != out.lag || g.levels != out.levels) {
            throw InvalidArgument("cannot average grids with different lags or levels");
        }
        out.series_length = std::min(out.series_length, g.series_length);
        for (std::size_t i = 0; i < g.matrix.size(); ++i) out.matrix[i] += g.matrix[i];
    }
    for (auto& v : out.matrix) v /= static_cast<double>(grids.size());
    out.n_averaged = grids.size();
    return out;
}

std::vector<ProbabilityLevel> default_pp_levels() {
    std::vector<ProbabilityLevel> levels;
    for (int i = 1; i <= 19; ++i) levels.emplace_back(i / 20.0);
    return levels;
}

}  // namespace qcorr
