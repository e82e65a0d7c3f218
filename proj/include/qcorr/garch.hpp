#pragma once

// GARCH(1,1), EGARCH(1,1) and GJR-GARCH(1,1) with Gaussian innovations.
//
//   r_t   = mu + eps_t,  eps_t = sigma_t z_t
//   GARCH:  s2_t = omega + alpha1 eps_{t-1}^2 + beta1 s2_{t-1}
//   GJR:    s2_t = omega + (alpha1 + gamma1 [eps_{t-1} < 0]) eps_{t-1}^2 + beta1 s2_{t-1}
//   EGARCH: log s2_t = omega + alpha1 (|z_{t-1}| - E|z|) + gamma1 z_{t-1} + beta1 log s2_{t-1}

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qcorr/series.hpp"

namespace qcorr {

enum class ModelKind { Garch, Egarch, Gjr };

std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view name);

struct GarchParams {
    ModelKind kind = ModelKind::Garch;
    double mu = 0.0;
    double omega = 0.0;
    double alpha1 = 0.0;
    double beta1 = 0.0;
    double gamma1 = 0.0;  // ignored for plain GARCH

    /// First violated constraint, or nullopt when the parameters are admissible.
    std::optional<std::string> violation() const;
    bool admissible() const { return !violation().has_value(); }
    /// Throws InvalidArgument naming the violated constraint.
    void validate() const;

    friend bool operator==(const GarchParams&, const GarchParams&) = default;
};

/// The demonstration set: omega 1e-5, alpha1 0.05, beta1 0.9, mu 0.001,
/// gamma1 = -0.06 for EGARCH and +0.06 for GJR.
GarchParams demonstration_params(ModelKind kind);

/// E|z| for a standard normal z.
inline constexpr double kMeanAbsNormal = 0.79788456080286535588;  // sqrt(2/pi)

/// Stationary variance; for EGARCH the fixed point exp(omega / (1 - beta1)).
double unconditional_variance(const GarchParams& params);

struct SimulationResult {
    TimeSeries returns;
    std::vector<double> variances;
    std::uint64_t seed = 0;
    std::size_t burn_in = 0;
    std::string generator;
};

inline constexpr std::size_t kDefaultBurnIn = 1000;
inline constexpr std::string_view kGeneratorName = "mt19937_64+std::normal_distribution";

/// Draws z_t i.i.d. N(0,1) from mt19937_64(seed), starts at the unconditional
/// variance and discards the first `burn_in` steps.
SimulationResult simulate(const GarchParams& params, std::size_t length, std::uint64_t seed,
                          std::size_t burn_in = kDefaultBurnIn);

struct Path {
    std::vector<double> returns;
    std::vector<double> variances;
};

/// Runs the recursion on given innovations starting from `initial_variance`.
Path run_recursion(const GarchParams& params, std::span<const double> innovations, double initial_variance);

}  // namespace qcorr
