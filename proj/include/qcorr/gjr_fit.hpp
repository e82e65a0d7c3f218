#pragma once

// Gaussian quasi-maximum-likelihood fitting of GJR-GARCH(1,1) with constant
// mean, plus the per-day fit / averaged-parameter resimulation workflow.

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qcorr/garch.hpp"
#include "qcorr/series.hpp"

namespace qcorr {

struct FitResult {
    GarchParams params{ModelKind::Gjr};
    double log_likelihood = 0.0;
    bool converged = false;
    std::size_t iterations = 0;  // objective evaluations over all starts
    std::size_t n_obs = 0;
    std::string reason;          // set when not converged
    std::vector<GarchParams> start_points;
};

struct FitBatch {
    std::vector<std::pair<std::string, FitResult>> fits;
    std::vector<std::pair<std::string, std::string>> excluded;  // day, reason
};

inline constexpr std::size_t kMinFitLength = 50;

/// Gaussian log-likelihood with eps_t = r_t - mu, sigma_1^2 = variance of the
/// demeaned eps and the GJR recursion afterwards. Any length accepted by
/// TimeSeries (two or more) is allowed.
double gjr_log_likelihood(const TimeSeries& returns, const GarchParams& params);

struct FitOptions {
    std::size_t max_evaluations_per_start = 4000;
};

/// Multi-start simplex search; never throws on bad data, reports it through
/// `converged` and `reason` instead.
FitResult fit_gjr(const TimeSeries& returns, const FitOptions& options = {});

/// One fit per day; days that fail land in `excluded`. Day keys are the
/// series labels, or "day<i>" when a label is empty.
FitBatch fit_per_day(std::span<const TimeSeries> days, std::size_t jobs = 1, const FitOptions& options = {});

/// Mean of (mu, omega, alpha1, beta1, gamma1) over converged fits.
/// With `admissible_only`, fits violating the GJR constraints are skipped too.
GarchParams average_params(const FitBatch& batch, bool admissible_only = false);

/// Per-series seed derived from a base seed (splitmix64 mixing).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

std::vector<SimulationResult> resimulate_experiment(const GarchParams& params, std::size_t n_series,
                                                    std::size_t length, std::uint64_t seed,
                                                    std::size_t burn_in = kDefaultBurnIn, std::size_t jobs = 1);

/// One simulation per converged fit, in batch order.
std::vector<SimulationResult> resimulate_fits(const FitBatch& batch, std::size_t length, std::uint64_t seed,
                                              std::size_t burn_in = kDefaultBurnIn, std::size_t jobs = 1);

}  // namespace qcorr
