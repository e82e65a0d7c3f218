#include "qcorr/garch.hpp"

#include <cmath>
#include <random>

#include "qcorr/error.hpp"

namespace qcorr {

std::string_view to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::Garch: return "garch";
        case ModelKind::Egarch: return "egarch";
        case ModelKind::Gjr: return "gjr";
    }
    return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
    if (name == "garch" || name == "GARCH") return ModelKind::Garch;
    if (name == "egarch" || name == "EGARCH") return ModelKind::Egarch;
    if (name == "gjr" || name == "GJR" || name == "gjr-garch" || name == "GJR-GARCH") return ModelKind::Gjr;
    throw InvalidArgument("unknown model kind '" + std::string(name) + "'");
}

std::optional<std::string> GarchParams::violation() const {
    for (double v : {mu, omega, alpha1, beta1, gamma1}) {
        if (!std::isfinite(v)) return "parameters must be finite";
    }
    if (kind == ModelKind::Egarch) {
        if (!(std::abs(beta1) < 1.0)) return "EGARCH requires |beta1| < 1";
        return std::nullopt;
    }
    if (!(omega > 0.0)) return "omega > 0";
    if (!(alpha1 >= 0.0)) return "alpha1 >= 0";
    if (!(beta1 >= 0.0)) return "beta1 >= 0";
    if (kind == ModelKind::Garch) {
        if (!(alpha1 + beta1 < 1.0)) return "alpha1 + beta1 < 1";
        return std::nullopt;
    }
    if (!(alpha1 + gamma1 >= 0.0)) return "alpha1 + gamma1 >= 0";
    if (!(alpha1 + beta1 + 0.5 * gamma1 < 1.0)) return "alpha1 + beta1 + gamma1/2 < 1";
    return std::nullopt;
}

void GarchParams::validate() const {
    if (auto v = violation()) {
        throw InvalidArgument("inadmissible " + std::string(to_string(kind)) + " parameters: " + *v);
    }
}

GarchParams demonstration_params(ModelKind kind) {
    GarchParams p{kind, 0.001, 0.00001, 0.05, 0.9, 0.0};
    if (kind == ModelKind::Egarch) p.gamma1 = -0.06;
    if (kind == ModelKind::Gjr) p.gamma1 = 0.06;
    return p;
}

double unconditional_variance(const GarchParams& params) {
    params.validate();
    switch (params.kind) {
        case ModelKind::Garch: return params.omega / (1.0 - params.alpha1 - params.beta1);
        case ModelKind::Gjr: return params.omega / (1.0 - params.alpha1 - params.beta1 - 0.5 * params.gamma1);
        case ModelKind::Egarch: return std::exp(params.omega / (1.0 - params.beta1));
    }
    return 0.0;
}

Path run_recursion(const GarchParams& params, std::span<const double> innovations, double initial_variance) {
    params.validate();
    if (!(initial_variance > 0.0)) throw InvalidArgument("initial variance must be positive");
    const std::size_t n = innovations.size();
    Path path;
    path.returns.resize(n);
    path.variances.resize(n);

    double s2 = initial_variance;
    double eps_prev = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        if (t > 0) {
            const double z_prev = innovations[t - 1];
            const double eps2 = eps_prev * eps_prev;
            switch (params.kind) {
                case ModelKind::Garch:
                    s2 = params.omega + params.alpha1 * eps2 + params.beta1 * s2;
                    break;
                case ModelKind::Gjr:
                    s2 = params.omega + params.alpha1 * eps2 + (eps_prev < 0.0 ? params.gamma1 * eps2 : 0.0) +
                         params.beta1 * s2;
                    break;
                case ModelKind::Egarch:
                    s2 = std::exp(params.omega + params.alpha1 * (std::abs(z_prev) - kMeanAbsNormal) +
                                  params.gamma1 * z_prev + params.beta1 * std::log(s2));
                    break;
            }
        }
        path.variances[t] = s2;
        eps_prev = std::sqrt(s2) * innovations[t];
        path.returns[t] = params.mu + eps_prev;
    }
    return path;
}

SimulationResult simulate(const GarchParams& params, std::size_t length, std::uint64_t seed, std::size_t burn_in) {
    params.validate();
    if (length < 2) throw InvalidArgument("simulation length must be at least 2");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> z(burn_in + length);
    for (auto& v : z) v = normal(rng);

    auto path = run_recursion(params, z, unconditional_variance(params));
    const auto skip = static_cast<std::ptrdiff_t>(burn_in);
    std::vector<double> returns(path.returns.begin() + skip, path.returns.end());
    std::vector<double> variances(path.variances.begin() + skip, path.variances.end());

    return SimulationResult{TimeSeries(std::move(returns), 1.0, std::string(to_string(params.kind))),
                            std::move(variances), seed, burn_in, std::string(kGeneratorName)};
}

}  // namespace qcorr
