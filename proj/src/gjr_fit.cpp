#include "qcorr/gjr_fit.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <set>

#include "qcorr/error.hpp"
#include "qcorr/parallel.hpp"
#include "nelder_mead.hpp"

namespace qcorr {

namespace {

constexpr double kMaxPersistence = 1.0 - 1e-6;
constexpr double kLog2Pi = 1.8378770664093454836;

struct Coefficients {
    double mu, omega, alpha1, beta1, gamma1;
};

// Log-likelihood, or nullopt when a variance turns nonpositive or non-finite.
std::optional<double> log_likelihood(std::span<const double> r, const Coefficients& c) {
    const std::size_t n = r.size();
    double mean = 0.0;
    for (double v : r) mean += v - c.mu;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : r) {
        const double d = (v - c.mu) - mean;
        var += d * d;
    }
    var /= static_cast<double>(n);

    double s2 = var;
    double eps_prev = 0.0;
    double acc = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        if (t > 0) {
            const double e2 = eps_prev * eps_prev;
            s2 = c.omega + (eps_prev < 0.0 ? c.alpha1 + c.gamma1 : c.alpha1) * e2 + c.beta1 * s2;
        }
        if (!(s2 > 0.0) || !std::isfinite(s2)) return std::nullopt;
        const double eps = r[t] - c.mu;
        acc += std::log(s2) + eps * eps / s2;
        eps_prev = eps;
    }
    return -0.5 * (static_cast<double>(n) * kLog2Pi + acc);
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double logit(double p) {
    p = std::clamp(p, 1e-9, 1.0 - 1e-9);
    return std::log(p / (1.0 - p));
}

// Unconstrained coordinates (mu, log omega, persistence, arch share, sign split):
//   u = alpha1 + beta1 + gamma1/2 in (0, 1 - 1e-6)
//   s = alpha1 + gamma1/2 = u v,  beta1 = u (1 - v)
//   alpha1 = 2 s w,  gamma1 = 2 s (1 - 2w)
// which keeps alpha1, beta1 >= 0 and alpha1 + gamma1 >= 0 for every w in (0, 1).
Coefficients from_theta(const std::vector<double>& th) {
    const double u = kMaxPersistence * logistic(th[2]);
    const double v = logistic(th[3]);
    const double w = logistic(th[4]);
    const double s = u * v;
    return {th[0], std::exp(th[1]), 2.0 * s * w, u * (1.0 - v), 2.0 * s * (1.0 - 2.0 * w)};
}

std::vector<double> to_theta(const Coefficients& c) {
    const double u = c.alpha1 + c.beta1 + 0.5 * c.gamma1;
    const double s = c.alpha1 + 0.5 * c.gamma1;
    return {c.mu, std::log(c.omega), logit(u / kMaxPersistence), logit(s / u), logit(c.alpha1 / (2.0 * s))};
}

// (alpha1, beta1, gamma1) start points: the default one and four perturbations.
constexpr std::array<std::array<double, 3>, 5> kStarts{{
    {0.05, 0.90, 0.00},
    {0.10, 0.85, 0.04},
    {0.02, 0.96, 0.02},
    {0.15, 0.70, -0.05},
    {0.05, 0.50, 0.10},
}};

GarchParams to_params(const Coefficients& c) {
    return GarchParams{ModelKind::Gjr, c.mu, c.omega, c.alpha1, c.beta1, c.gamma1};
}

}  // namespace

double gjr_log_likelihood(const TimeSeries& returns, const GarchParams& params) {
    GarchParams p = params;
    p.kind = ModelKind::Gjr;
    p.validate();
    const auto ll = log_likelihood(returns.values(), {p.mu, p.omega, p.alpha1, p.beta1, p.gamma1});
    if (!ll) throw InvalidArgument("nonpositive conditional variance in likelihood recursion");
    return *ll;
}

FitResult fit_gjr(const TimeSeries& returns, const FitOptions& options) {
    FitResult result;
    result.n_obs = returns.size();
    const auto r = returns.values();
    if (r.size() < kMinFitLength) {
        result.reason = "series too short (need at least " + std::to_string(kMinFitLength) + " returns)";
        return result;
    }

    double mean = 0.0;
    for (double v : r) mean += v;
    mean /= static_cast<double>(r.size());
    double var = 0.0;
    for (double v : r) var += (v - mean) * (v - mean);
    var /= static_cast<double>(r.size());
    const double sd = std::sqrt(var);
    if (!(sd > 0.0) || !std::isfinite(sd)) {
        result.reason = "zero-variance returns";
        return result;
    }

    // Fit on standardized data; the model is location/scale equivariant.
    std::vector<double> y(r.size());
    for (std::size_t t = 0; t < r.size(); ++t) y[t] = (r[t] - mean) / sd;

    auto objective = [&y](const std::vector<double>& th) {
        const auto ll = log_likelihood(y, from_theta(th));
        return ll ? -*ll : std::numeric_limits<double>::infinity();
    };

    detail::SimplexOptions simplex;
    simplex.initial_step = 0.25;
    simplex.max_evaluations = options.max_evaluations_per_start;

    std::optional<detail::SimplexResult> best;
    bool best_converged = false;
    for (const auto& s : kStarts) {
        const double u = s[0] + s[1] + 0.5 * s[2];
        const Coefficients start{0.0, 1.0 - u, s[0], s[1], s[2]};
        result.start_points.push_back(to_params({mean, var * (1.0 - u), s[0], s[1], s[2]}));

        auto run = detail::nelder_mead(objective, to_theta(start), simplex);
        result.iterations += run.evaluations;
        // A restart from the optimum rebuilds a collapsed simplex.
        auto refined = detail::nelder_mead(objective, run.x, simplex);
        result.iterations += refined.evaluations;
        if (refined.value > run.value) refined = run;

        const bool better = !best || (refined.converged && !best_converged) ||
                            (refined.converged == best_converged && refined.value < best->value);
        if (better) {
            best = refined;
            best_converged = refined.converged;
        }
    }

    const auto c = from_theta(best->x);
    result.params = to_params({mean + sd * c.mu, var * c.omega, c.alpha1, c.beta1, c.gamma1});
    const auto ll = log_likelihood(r, {result.params.mu, result.params.omega, result.params.alpha1,
                                       result.params.beta1, result.params.gamma1});
    result.log_likelihood = ll.value_or(-std::numeric_limits<double>::infinity());
    result.converged = best_converged && ll.has_value() && result.params.admissible();
    if (!result.converged) {
        result.reason = ll ? "optimizer did not converge" : "nonfinite likelihood at optimum";
    }
    return result;
}

FitBatch fit_per_day(std::span<const TimeSeries> days, std::size_t jobs, const FitOptions& options) {
    if (days.empty()) throw InvalidArgument("no days to fit");
    std::vector<std::string> keys(days.size());
    std::set<std::string> seen;
    for (std::size_t i = 0; i < days.size(); ++i) {
        keys[i] = days[i].label().empty() ? "day" + std::to_string(i) : days[i].label();
        if (!seen.insert(keys[i]).second) throw InvalidArgument("duplicate day key '" + keys[i] + "'");
    }

    std::vector<FitResult> results(days.size());
    parallel_for(days.size(), jobs, [&](std::size_t i) { results[i] = fit_gjr(days[i], options); });

    FitBatch batch;
    for (std::size_t i = 0; i < days.size(); ++i) {
        if (results[i].converged) {
            batch.fits.emplace_back(keys[i], std::move(results[i]));
        } else {
            batch.excluded.emplace_back(keys[i], results[i].reason);
        }
    }
    return batch;
}

GarchParams average_params(const FitBatch& batch, bool admissible_only) {
    GarchParams avg{ModelKind::Gjr};
    std::size_t count = 0;
    for (const auto& [day, fit] : batch.fits) {
        if (!fit.converged) continue;
        if (admissible_only && !fit.params.admissible()) continue;
        avg.mu += fit.params.mu;
        avg.omega += fit.params.omega;
        avg.alpha1 += fit.params.alpha1;
        avg.beta1 += fit.params.beta1;
        avg.gamma1 += fit.params.gamma1;
        ++count;
    }
    if (count == 0) throw InvalidArgument("no converged fits to average");
    const double n = static_cast<double>(count);
    avg.mu /= n;
    avg.omega /= n;
    avg.alpha1 /= n;
    avg.beta1 /= n;
    avg.gamma1 /= n;
    return avg;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::vector<SimulationResult> resimulate_experiment(const GarchParams& params, std::size_t n_series,
                                                    std::size_t length, std::uint64_t seed, std::size_t burn_in,
                                                    std::size_t jobs) {
    params.validate();
    if (n_series == 0) throw InvalidArgument("n_series must be positive");
    std::vector<std::optional<SimulationResult>> slots(n_series);
    parallel_for(n_series, jobs, [&](std::size_t i) {
        slots[i] = simulate(params, length, derive_seed(seed, i), burn_in);
    });
    std::vector<SimulationResult> out;
    out.reserve(n_series);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

std::vector<SimulationResult> resimulate_fits(const FitBatch& batch, std::size_t length, std::uint64_t seed,
                                              std::size_t burn_in, std::size_t jobs) {
    std::vector<GarchParams> sets;
    for (const auto& [day, fit] : batch.fits) {
        if (fit.converged) sets.push_back(fit.params);
    }
    if (sets.empty()) throw InvalidArgument("no converged fits to resimulate");
    std::vector<std::optional<SimulationResult>> slots(sets.size());
    parallel_for(sets.size(), jobs, [&](std::size_t i) {
        slots[i] = simulate(sets[i], length, derive_seed(seed, i), burn_in);
    });
    std::vector<SimulationResult> out;
    out.reserve(sets.size());
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

}  // namespace qcorr
