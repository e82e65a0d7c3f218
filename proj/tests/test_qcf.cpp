#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "oracle.hpp"
#include "qcorr/error.hpp"
#include "qcorr/garch.hpp"
#include "qcorr/qcf.hpp"

using namespace qcorr;

namespace {

const std::vector<double> kExample{1, -5, 10, 0, -6, -2, -2, 2, 0, 2};

QcfCurve make_curve(const std::vector<double>& values) {
    QcfCurve c;
    c.alpha = ProbabilityLevel(0.5);
    c.beta = ProbabilityLevel(0.5);
    const int L = static_cast<int>(values.size() / 2);
    for (int l = -L; l <= L; ++l) c.lags.push_back(l);
    c.values = values;
    c.series_length = 1000;
    return c;
}

std::vector<std::uint8_t> to_bits(const std::vector<int>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_SUITE("qcf") {

TEST_CASE("empirical quantile examples") {
    CHECK(empirical_quantile(std::span<const double>(kExample), ProbabilityLevel(0.5)) == 0.0);
    const std::vector<double> constant(7, 3.25);
    for (double p : {0.0, 0.1, 0.5, 0.99, 1.0}) {
        CHECK(empirical_quantile(std::span<const double>(constant), ProbabilityLevel(p)) == 3.25);
    }
    const std::vector<double> three{3, 1, 2};
    CHECK(empirical_quantile(std::span<const double>(three), ProbabilityLevel(1.0 / 3.0)) == 1.0);
    CHECK(empirical_quantile(std::span<const double>(three), ProbabilityLevel(0.0)) == 1.0);
    CHECK(empirical_quantile(std::span<const double>(three), ProbabilityLevel(1.0)) == 3.0);

    const std::vector<double> empty;
    CHECK_THROWS_WITH_AS(empirical_quantile(std::span<const double>(empty), ProbabilityLevel(0.5)),
                         doctest::Contains("empty input"), InvalidArgument);
}

TEST_CASE("quantile rank follows decimal levels") {
    CHECK(quantile_rank(100, 0.15) == 15);
    CHECK(quantile_rank(20, 0.05) == 1);
    CHECK(quantile_rank(10, 0.5) == 5);
    CHECK(quantile_rank(10, 0.51) == 6);
    CHECK(quantile_rank(10, 0.0) == 1);
    CHECK(quantile_rank(10, 1.0) == 10);
}

TEST_CASE("empirical quantile matches sort oracle") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        const auto n = std::uniform_int_distribution<std::size_t>(1, 300)(rng);
        const auto x = (i % 2) ? oracle::gaussian_noise(n, rng()) : oracle::tied_series(n, rng());
        const double p = std::uniform_int_distribution<int>(0, 20)(rng) / 20.0;
        CHECK(empirical_quantile(std::span<const double>(x), ProbabilityLevel(p)) == oracle::quantile(x, p));
    }
}

TEST_CASE("probability level validation") {
    CHECK_THROWS_AS(ProbabilityLevel(-0.01), InvalidArgument);
    CHECK_THROWS_AS(ProbabilityLevel(1.01), InvalidArgument);
    CHECK_THROWS_AS(ProbabilityLevel(std::nan("")), InvalidArgument);
    CHECK_THROWS_AS(TimeSeries({1.0}), InvalidArgument);
    CHECK_THROWS_AS(TimeSeries({1.0, INFINITY}), InvalidArgument);
    CHECK_THROWS_AS(TimeSeries({1.0, 2.0}, 0.0), InvalidArgument);
}

TEST_CASE("filter examples") {
    const auto b = filter_series(std::span<const double>(kExample), ProbabilityLevel(0.5));
    CHECK(b.bits == to_bits({0, 1, 0, 1, 1, 1, 1, 0, 1, 0}));
    CHECK(b.quantile_value == 0.0);
    CHECK(b.achieved_fraction == doctest::Approx(0.6));
    CHECK(b.level.value() == 0.5);

    const auto all = filter_series(std::span<const double>(kExample), ProbabilityLevel(1.0));
    CHECK(std::all_of(all.bits.begin(), all.bits.end(), [](auto v) { return v == 1; }));

    const std::vector<double> down{5, 4, 3, 2, 1};
    CHECK(filter_series(std::span<const double>(down), ProbabilityLevel(0.4)).bits == to_bits({0, 0, 0, 1, 1}));

    const std::vector<double> empty;
    CHECK_THROWS_AS(filter_series(std::span<const double>(empty), ProbabilityLevel(0.5)), InvalidArgument);
}

TEST_CASE("achieved fraction bound holds with ties") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 100; ++i) {
        const auto x = oracle::tied_series(97, rng());
        const double p = std::uniform_int_distribution<int>(0, 20)(rng) / 20.0;
        const auto b = filter_series(std::span<const double>(x), ProbabilityLevel(p));
        const double ones = static_cast<double>(std::count(b.bits.begin(), b.bits.end(), 1));
        CHECK(b.achieved_fraction == ones / 97.0);
        CHECK(b.achieved_fraction >= static_cast<double>(quantile_rank(97, p)) / 97.0);
        CHECK(b.bits == to_bits(oracle::filter(x, p)));
    }
}

TEST_CASE("worked example values") {
    const TimeSeries x(kExample);
    const auto c = qcf(x, ProbabilityLevel(0.5), ProbabilityLevel(0.5), 2);
    // Reference values from the brute-force oracle: -0.4 and 11/30.
    CHECK(oracle::qcf(kExample, 0.5, 0.5, 1) == doctest::Approx(-0.4).epsilon(1e-15));
    CHECK(oracle::qcf(kExample, 0.5, 0.5, 2) == doctest::Approx(11.0 / 30.0).epsilon(1e-15));
    CHECK(c.at(0) == 1.0);
    CHECK(c.at(1) == doctest::Approx(-0.4).epsilon(1e-14));
    CHECK(c.at(-1) == c.at(1));
    CHECK(c.at(2) == doctest::Approx(11.0 / 30.0).epsilon(1e-14));
    CHECK(c.series_length == 10);
    CHECK(c.n_averaged == 1);

    const auto f = qcf_fast(x, ProbabilityLevel(0.5), ProbabilityLevel(0.5), 2);
    for (int l = -2; l <= 2; ++l) CHECK(std::abs(f.at(l) - c.at(l)) <= 1e-10);
}

TEST_CASE("lag zero is one for equal levels") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 20; ++i) {
        const TimeSeries x(oracle::gaussian_noise(200, rng()));
        const ProbabilityLevel p(std::uniform_int_distribution<int>(1, 19)(rng) / 20.0);
        CHECK(qcf(x, p, p, 5).at(0) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(qcf_fast(x, p, p, 5).at(0) == 1.0);
    }
}

TEST_CASE("white noise stays near zero") {
    const std::size_t T = 100000;
    const TimeSeries x(oracle::gaussian_noise(T, 2024));
    const auto c = qcf_fast(x, ProbabilityLevel(0.05), ProbabilityLevel(0.05), 100);
    const double bound = 4.0 / std::sqrt(static_cast<double>(T));
    for (int l = 1; l <= 100; ++l) CHECK(std::abs(c.at(l)) < bound);
}

TEST_CASE("degenerate levels and lag range are refused") {
    const TimeSeries x(kExample);
    CHECK_THROWS_WITH_AS(qcf(x, ProbabilityLevel(1.0), ProbabilityLevel(0.5), 2),
                         doctest::Contains("degenerate quantile level"), DegenerateLevel);
    CHECK_THROWS_AS(qcf_fast(x, ProbabilityLevel(0.5), ProbabilityLevel(1.0), 2), DegenerateLevel);
    const TimeSeries flat(std::vector<double>(20, 1.0));
    CHECK_THROWS_AS(qcf(flat, ProbabilityLevel(0.3), ProbabilityLevel(0.3), 2), DegenerateLevel);
    CHECK_THROWS_AS(qcf(x, ProbabilityLevel(0.5), ProbabilityLevel(0.5), 5), InvalidArgument);
    CHECK_THROWS_AS(qcf(x, ProbabilityLevel(0.5), ProbabilityLevel(0.5), -1), InvalidArgument);
    CHECK_NOTHROW(qcf(x, ProbabilityLevel(0.5), ProbabilityLevel(0.5), 4));
}

TEST_CASE("direct estimator matches oracle") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 100; ++i) {
        const auto n = std::uniform_int_distribution<std::size_t>(20, 400)(rng);
        const auto x = (i % 3 == 0) ? oracle::tied_series(n, rng()) : oracle::gaussian_noise(n, rng());
        const double a = std::uniform_int_distribution<int>(1, 19)(rng) / 20.0;
        const double b = std::uniform_int_distribution<int>(1, 19)(rng) / 20.0;
        const int L = std::uniform_int_distribution<int>(1, static_cast<int>(n / 4))(rng);
        QcfCurve c;
        try {
            c = qcf(TimeSeries(x), ProbabilityLevel(a), ProbabilityLevel(b), L);
        } catch (const DegenerateLevel&) {
            continue;
        }
        for (int l = -L; l <= L; ++l) REQUIRE(std::abs(c.at(l) - oracle::qcf(x, a, b, l)) <= 1e-12);
    }
}

TEST_CASE("fast path matches direct evaluation") {
    std::mt19937_64 rng(29);
    for (int i = 0; i < 100; ++i) {
        const auto n = std::uniform_int_distribution<std::size_t>(8, 2048)(rng);
        const TimeSeries x(oracle::gaussian_noise(n, rng()));
        const ProbabilityLevel a(std::uniform_int_distribution<int>(1, 19)(rng) / 20.0);
        const ProbabilityLevel b(std::uniform_int_distribution<int>(1, 19)(rng) / 20.0);
        const int L = std::uniform_int_distribution<int>(1, static_cast<int>(n / 4))(rng);
        const auto slow = qcf(x, a, b, L);
        const auto fast = qcf_fast(x, a, b, L);
        REQUIRE(fast.lags == slow.lags);
        for (std::size_t k = 0; k < slow.values.size(); ++k) REQUIRE(std::abs(fast.values[k] - slow.values[k]) <= 1e-10);
    }
    const TimeSeries big(oracle::gaussian_noise(4096, 1));
    const auto slow = qcf(big, ProbabilityLevel(0.1), ProbabilityLevel(0.7), 500);
    const auto fast = qcf_fast(big, ProbabilityLevel(0.1), ProbabilityLevel(0.7), 500);
    for (std::size_t k = 0; k < slow.values.size(); ++k) CHECK(std::abs(fast.values[k] - slow.values[k]) <= 1e-10);
}

TEST_CASE("single lag evaluation") {
    const auto a = filter_series(std::span<const double>(kExample), ProbabilityLevel(0.5));
    const auto b = filter_series(std::span<const double>(kExample), ProbabilityLevel(0.3));
    const auto c = cross_qcf(a, b, 3);
    for (int l = -3; l <= 3; ++l) CHECK(cross_qcf_at(a, b, l) == c.at(l));
}

TEST_CASE("invariance properties") {
    std::mt19937_64 rng(41);
    for (int i = 0; i < 50; ++i) {
        const auto n = std::uniform_int_distribution<std::size_t>(30, 500)(rng);
        const auto xv = oracle::gaussian_noise(n, rng());
        const TimeSeries x(xv);
        const ProbabilityLevel a(std::uniform_int_distribution<int>(1, 19)(rng) / 20.0);
        const ProbabilityLevel b(std::uniform_int_distribution<int>(1, 19)(rng) / 20.0);
        const int L = static_cast<int>(n / 4);

        const auto aa = qcf(x, a, a, L);
        for (int l = 1; l <= L; ++l) REQUIRE(aa.at(l) == aa.at(-l));

        const auto ab = qcf(x, a, b, L);
        const auto ba = qcf(x, b, a, L);
        for (int l = -L; l <= L; ++l) {
            REQUIRE(ab.at(l) == ba.at(-l));
            REQUIRE(std::abs(ab.at(l)) <= 1.0 + 1e-12);
        }

        const auto fa = filter_series(x, a);
        const auto fb = filter_series(x, b);
        const auto both = cross_qcf(fa.complement(), fb.complement(), L);
        const auto one = cross_qcf(fa.complement(), fb, L);
        for (int l = -L; l <= L; ++l) {
            REQUIRE(std::abs(both.at(l) - ab.at(l)) <= 1e-12);
            REQUIRE(std::abs(one.at(l) + ab.at(l)) <= 1e-12);
        }

        std::vector<double> yv;
        for (double v : xv) yv.push_back(std::exp(3.0 * v) - 7.0);
        const TimeSeries y(yv);
        REQUIRE(filter_series(y, a).bits == fa.bits);
        const auto ty = qcf(y, a, b, L);
        REQUIRE(ty.values == ab.values);
    }
}

TEST_CASE("complement flips the achieved fraction") {
    const auto b = filter_series(std::span<const double>(kExample), ProbabilityLevel(0.5));
    const auto c = b.complement();
    CHECK(c.bits == to_bits({1, 0, 1, 0, 0, 0, 0, 1, 0, 1}));
    CHECK(c.achieved_fraction == doctest::Approx(0.4));
    CHECK(c.complement().bits == b.bits);
}

TEST_CASE("averaging curves") {
    const auto c = make_curve({0.1, -0.3, 1.0, -0.3, 0.1});
    const std::vector<QcfCurve> one{c};
    const auto avg1 = average_curves(one);
    CHECK(avg1.values == c.values);
    CHECK(avg1.n_averaged == 1);

    auto neg = c;
    for (auto& v : neg.values) v = -v;
    const std::vector<QcfCurve> pair{c, neg};
    for (double v : average_curves(pair).values) CHECK(v == 0.0);

    const std::vector<QcfCurve> three{make_curve(std::vector<double>(5, 0.1)), make_curve(std::vector<double>(5, 0.2)),
                                      make_curve(std::vector<double>(5, 0.3))};
    const auto avg3 = average_curves(three);
    CHECK(avg3.n_averaged == 3);
    for (double v : avg3.values) CHECK(v == doctest::Approx(0.2).epsilon(1e-15));

    auto other_pair = c;
    other_pair.beta = ProbabilityLevel(0.05);
    const std::vector<QcfCurve> mixed{c, other_pair};
    CHECK_THROWS_AS(average_curves(mixed), InvalidArgument);
    const std::vector<QcfCurve> grids{c, make_curve({0.0, 0.0, 1.0})};
    CHECK_THROWS_AS(average_curves(grids), InvalidArgument);
    CHECK_THROWS_AS(average_curves(std::span<const QcfCurve>{}), InvalidArgument);
}

TEST_CASE("confidence band") {
    CHECK(confidence_band(make_curve({0, 0, 0, 1, 0, 0, 0})) == 0.0);
    const double c = 0.03;
    CHECK(confidence_band(make_curve({c, -c, c, 1, c, -c, c})) == doctest::Approx(1.96 * c).epsilon(1e-14));
    CHECK_THROWS_AS(confidence_band(make_curve({1.0})), InvalidArgument);
    auto off = make_curve({0, 0, 1, 0, 0});
    off.alpha = ProbabilityLevel(0.05);
    CHECK_THROWS_AS(confidence_band(off), InvalidArgument);
}

TEST_CASE("band covers its own GARCH reference curve") {
    const auto params = demonstration_params(ModelKind::Garch);
    double covered = 0.0, total = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto sim = simulate(params, 2000, seed);
        const auto ref = qcf_fast(sim.returns, ProbabilityLevel(0.5), ProbabilityLevel(0.5), 100);
        const double band = confidence_band(ref);
        for (std::size_t k = 0; k < ref.lags.size(); ++k) {
            if (ref.lags[k] == 0) continue;
            covered += std::abs(ref.values[k]) <= band ? 1.0 : 0.0;
            total += 1.0;
        }
    }
    CHECK(covered / total >= 0.93);
}

TEST_CASE("asymmetry examples") {
    const auto left = make_curve({0.2, 0.1, 1.0, 0.0, 0.0});
    CHECK(asymmetry(left).delta == 1.0);
    CHECK(asymmetry(mirrored(left)).delta == -1.0);
    CHECK(asymmetry(make_curve({0.2, -0.1, 1.0, -0.1, 0.2})).delta == 0.0);

    const auto r = asymmetry(make_curve({-0.1, 0.2, 1.0, 0.05, -0.05}));
    CHECK(r.area_neg == doctest::Approx(0.3));
    CHECK(r.area_pos == doctest::Approx(0.1));
    CHECK(r.delta == doctest::Approx(0.5));
    CHECK(r.max_lag == 2);
    CHECK_FALSE(r.zero_area);

    const auto z = asymmetry(make_curve({0, 0, 1, 0, 0}));
    CHECK(z.delta == 0.0);
    CHECK(z.zero_area);

    const auto truncated = asymmetry(make_curve({0.5, 0.1, 1.0, 0.1, 0.0}), 1);
    CHECK(truncated.delta == 0.0);
    CHECK(truncated.max_lag == 1);

    auto lopsided = make_curve({0.1, 1.0, 0.1});
    lopsided.lags = {-1, 0, 1};
    lopsided.lags.push_back(2);
    lopsided.values.push_back(0.1);
    CHECK_THROWS_AS(asymmetry(lopsided), InvalidArgument);
    CHECK_THROWS_AS(asymmetry(make_curve({0.1, 1.0, 0.1}), 2), InvalidArgument);
}

TEST_CASE("asymmetry bounds and mirror property") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        std::vector<double> v(21);
        for (auto& e : v) e = u(rng);
        const auto c = make_curve(v);
        const double d = asymmetry(c).delta;
        CHECK(d >= -1.0);
        CHECK(d <= 1.0);
        CHECK(asymmetry(mirrored(c)).delta == -d);
    }
}

TEST_CASE("probability-probability grid") {
    const std::vector<double> xv{0.3, -1.2, 2.5, 0.0, 0.7, -0.4, 1.1, -2.0, 0.9, -0.1, 0.5, 1.7};
    const TimeSeries x(xv);
    const std::vector<ProbabilityLevel> levels{ProbabilityLevel(0.25), ProbabilityLevel(0.5), ProbabilityLevel(0.75)};

    const auto g0 = pp_grid(x, levels, 0);
    for (std::size_t i = 0; i < 3; ++i) CHECK(g0(i, i) == doctest::Approx(1.0).epsilon(1e-14));

    const auto g2 = pp_grid(x, levels, 2);
    const auto gm2 = pp_grid(x, levels, -2);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t k = 0; k < 3; ++k) {
            CHECK(g2(i, k) == gm2(k, i));
            CHECK(g2(i, k) == doctest::Approx(oracle::qcf(xv, levels[i].value(), levels[k].value(), 2)).epsilon(1e-12));
        }
    }
    CHECK(g2.lag == 2);
    CHECK(g2.series_length == xv.size());

    const std::vector<ProbabilityLevel> edge{ProbabilityLevel(0.5), ProbabilityLevel(1.0)};
    CHECK_THROWS_AS(pp_grid(x, edge, 1), InvalidArgument);
    const TimeSeries tied({1, 1, 1, 1, 1, 1, 1, 1, 2, 3});
    const std::vector<ProbabilityLevel> low{ProbabilityLevel(0.5), ProbabilityLevel(0.95)};
    CHECK_THROWS_AS(pp_grid(tied, low, 1), DegenerateLevel);
    CHECK_THROWS_AS(pp_grid(x, levels, 6), InvalidArgument);

    const std::vector<PPGrid> grids{g2, g2};
    const auto avg = average_grids(grids);
    CHECK(avg.n_averaged == 2);
    CHECK(avg.matrix == g2.matrix);
    const std::vector<PPGrid> mixed{g2, gm2};
    CHECK_THROWS_AS(average_grids(mixed), InvalidArgument);
}

TEST_CASE("default grid levels") {
    const auto levels = default_pp_levels();
    REQUIRE(levels.size() == 19);
    CHECK(levels.front().value() == 0.05);
    CHECK(levels[2].value() == 0.15);
    CHECK(levels.back().value() == 0.95);
}

}  // TEST_SUITE
