#include "qcorr/io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include <unistd.h>

#include "qcorr/csv.hpp"
#include "qcorr/error.hpp"

namespace qcorr {

void write_curve_csv(std::ostream& out, const QcfCurve& curve) {
    out << (curve.ci_half_width ? "lag,qcf,ci\n" : "lag,qcf\n");
    for (std::size_t i = 0; i < curve.lags.size(); ++i) {
        out << curve.lags[i] << ',' << format_real(curve.values[i]);
        if (curve.ci_half_width) out << ',' << format_real(*curve.ci_half_width);
        out << '\n';
    }
}

json curve_to_json(const QcfCurve& curve) {
    json j;
    j["alpha"] = curve.alpha.value();
    j["beta"] = curve.beta.value();
    j["series_length"] = curve.series_length;
    j["n_averaged"] = curve.n_averaged;
    j["ci_half_width"] = curve.ci_half_width ? json(*curve.ci_half_width) : json(nullptr);
    j["lags"] = curve.lags;
    j["values"] = curve.values;
    return j;
}

QcfCurve curve_from_json(const json& j) {
    try {
        QcfCurve c;
        c.alpha = ProbabilityLevel(j.at("alpha").get<double>());
        c.beta = ProbabilityLevel(j.at("beta").get<double>());
        c.series_length = j.at("series_length").get<std::size_t>();
        c.n_averaged = j.at("n_averaged").get<std::size_t>();
        if (!j.at("ci_half_width").is_null()) c.ci_half_width = j.at("ci_half_width").get<double>();
        c.lags = j.at("lags").get<std::vector<int>>();
        c.values = j.at("values").get<std::vector<double>>();
        if (c.lags.size() != c.values.size()) throw DataError("curve JSON: lags and values differ in length");
        return c;
    } catch (const json::exception& e) {
        throw DataError(std::string("curve JSON: ") + e.what());
    }
}

QcfCurve read_curve_csv(std::istream& in, ProbabilityLevel alpha, ProbabilityLevel beta) {
    const auto table = read_csv(in);
    const auto lag_col = table.column("lag");
    const auto val_col = table.column("qcf");
    const auto ci_col = table.find_column("ci");
    QcfCurve c;
    c.alpha = alpha;
    c.beta = beta;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        c.lags.push_back(static_cast<int>(parse_integer(row[lag_col], "lag", i + 2)));
        c.values.push_back(parse_real(row[val_col], "qcf", i + 2));
        if (ci_col && i == 0) c.ci_half_width = parse_real(row[*ci_col], "ci", i + 2);
        if (i > 0 && c.lags[i] <= c.lags[i - 1]) throw DataError("curve CSV lags must increase");
    }
    if (c.lags.empty()) throw DataError("curve CSV has no rows");
    // Length is not stored in CSV; the lag range gives a lower bound.
    c.series_length = 2 * static_cast<std::size_t>(std::max(std::abs(c.lags.front()), std::abs(c.lags.back()))) + 1;
    return c;
}

void write_grid_csv(std::ostream& out, const PPGrid& grid) {
    out << "alpha\\beta";
    for (const auto& p : grid.levels) out << ',' << format_real(p.value());
    out << '\n';
    for (std::size_t i = 0; i < grid.dim(); ++i) {
        out << format_real(grid.levels[i].value());
        for (std::size_t k = 0; k < grid.dim(); ++k) out << ',' << format_real(grid(i, k));
        out << '\n';
    }
}

json grid_to_json(const PPGrid& grid) {
    json j;
    j["lag"] = grid.lag;
    std::vector<double> levels;
    for (const auto& p : grid.levels) levels.push_back(p.value());
    j["levels"] = levels;
    json rows = json::array();
    for (std::size_t i = 0; i < grid.dim(); ++i) {
        std::vector<double> row(grid.matrix.begin() + static_cast<std::ptrdiff_t>(i * grid.dim()),
                                grid.matrix.begin() + static_cast<std::ptrdiff_t>((i + 1) * grid.dim()));
        rows.push_back(row);
    }
    j["matrix"] = rows;
    j["series_length"] = grid.series_length;
    j["n_averaged"] = grid.n_averaged;
    return j;
}

json params_to_json(const GarchParams& p) {
    return json{{"model", std::string(to_string(p.kind))},
                {"mu", p.mu},
                {"omega", p.omega},
                {"alpha1", p.alpha1},
                {"beta1", p.beta1},
                {"gamma1", p.gamma1}};
}

GarchParams params_from_json(const json& j) {
    try {
        const json& p = j.contains("params") ? j.at("params") : j;
        GarchParams out;
        out.kind = parse_model_kind(p.at("model").get<std::string>());
        out.mu = p.at("mu").get<double>();
        out.omega = p.at("omega").get<double>();
        out.alpha1 = p.at("alpha1").get<double>();
        out.beta1 = p.at("beta1").get<double>();
        out.gamma1 = p.value("gamma1", 0.0);
        return out;
    } catch (const json::exception& e) {
        throw DataError(std::string("parameter JSON: ") + e.what());
    }
}

void write_simulation_csv(std::ostream& out, const SimulationResult& sim) {
    out << "t,return,variance\n";
    for (std::size_t t = 0; t < sim.variances.size(); ++t) {
        out << t << ',' << format_real(sim.returns[t]) << ',' << format_real(sim.variances[t]) << '\n';
    }
}

json simulation_sidecar(const SimulationResult& sim, const GarchParams& params) {
    return json{{"params", params_to_json(params)},
                {"seed", sim.seed},
                {"burn_in", sim.burn_in},
                {"length", sim.variances.size()},
                {"generator", sim.generator}};
}

void write_simulations_csv(std::ostream& out, const std::vector<SimulationResult>& sims) {
    out << "series,t,return,variance\n";
    for (std::size_t s = 0; s < sims.size(); ++s) {
        const auto& sim = sims[s];
        for (std::size_t t = 0; t < sim.variances.size(); ++t) {
            out << s << ',' << t << ',' << format_real(sim.returns[t]) << ',' << format_real(sim.variances[t])
                << '\n';
        }
    }
}

void write_fit_batch_csv(std::ostream& out, const FitBatch& batch) {
    out << "day,mu,omega,alpha1,beta1,gamma1,loglik,converged\n";
    for (const auto& [day, fit] : batch.fits) {
        const auto& p = fit.params;
        out << day << ',' << format_real(p.mu) << ',' << format_real(p.omega) << ',' << format_real(p.alpha1) << ','
            << format_real(p.beta1) << ',' << format_real(p.gamma1) << ',' << format_real(fit.log_likelihood) << ','
            << (fit.converged ? 1 : 0) << '\n';
    }
    for (const auto& [day, reason] : batch.excluded) {
        out << day << ",nan,nan,nan,nan,nan,nan,0\n";
    }
}

FitBatch read_fit_batch_csv(std::istream& in) {
    const auto table = read_csv(in);
    const auto day = table.column("day");
    const auto mu = table.column("mu");
    const auto omega = table.column("omega");
    const auto a1 = table.column("alpha1");
    const auto b1 = table.column("beta1");
    const auto g1 = table.column("gamma1");
    const auto ll = table.column("loglik");
    const auto conv = table.column("converged");
    FitBatch batch;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        const std::size_t line = i + 2;
        if (parse_integer(row[conv], "converged", line) == 0) {
            batch.excluded.emplace_back(row[day], "not converged");
            continue;
        }
        FitResult fit;
        fit.params = GarchParams{ModelKind::Gjr,
                                 parse_real(row[mu], "mu", line),
                                 parse_real(row[omega], "omega", line),
                                 parse_real(row[a1], "alpha1", line),
                                 parse_real(row[b1], "beta1", line),
                                 parse_real(row[g1], "gamma1", line)};
        fit.log_likelihood = parse_real(row[ll], "loglik", line);
        fit.converged = true;
        batch.fits.emplace_back(row[day], std::move(fit));
    }
    return batch;
}

void write_trading_day_csv(std::ostream& out, const TradingDay& day) {
    out << "second,price\n";
    for (std::size_t t = 0; t < day.prices.size(); ++t) out << t << ',' << format_real(day.prices[t]) << '\n';
}

TradingDay read_trading_day_csv(std::istream& in, std::string instrument, std::string date) {
    const auto table = read_csv(in);
    const auto sec = table.column("second");
    const auto price = table.column("price");
    TradingDay day{std::move(instrument), std::move(date), {}, 0};
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        if (parse_integer(table.rows[i][sec], "second", i + 2) != static_cast<std::int64_t>(i)) {
            throw DataError("trading day CSV seconds must run 0, 1, 2, ...");
        }
        const double p = parse_real(table.rows[i][price], "price", i + 2);
        if (!(p > 0.0)) throw DataError("nonpositive price on line " + std::to_string(i + 2));
        day.prices.push_back(p);
    }
    day.traded_seconds = day.prices.size();
    return day;
}

void write_rejections_csv(std::ostream& out, const std::vector<Rejection>& rejections) {
    out << "date,instrument,reason\n";
    for (const auto& r : rejections) out << r.date << ',' << r.instrument << ',' << r.reason << '\n';
}

json asymmetry_to_json(const AsymmetryReport& r) {
    return json{{"area_neg", r.area_neg},
                {"area_pos", r.area_pos},
                {"delta", r.delta},
                {"max_lag", r.max_lag},
                {"zero_area", r.zero_area}};
}

std::vector<TimeSeries> read_series_csv(std::istream& in, const std::string& label,
                                        const SeriesInputOptions& options) {
    const auto table = read_csv(in);
    std::optional<std::size_t> col;
    bool prices = false;
    for (const char* name : {"return", "value"}) {
        if ((col = table.find_column(name))) break;
    }
    if (!col && (col = table.find_column("price"))) prices = true;
    if (!col && table.header.size() == 1) col = 0;
    if (!col) throw DataError("series CSV needs a 'return', 'value' or 'price' column");

    const auto series_col = table.find_column("series");
    std::vector<std::string> order;
    std::map<std::string, std::vector<double>> groups;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        const std::string key = series_col ? row[*series_col] : std::string{};
        auto [it, inserted] = groups.try_emplace(key);
        if (inserted) order.push_back(key);
        it->second.push_back(parse_real(row[*col], table.header[*col], i + 2));
    }

    std::vector<TimeSeries> out;
    for (const auto& key : order) {
        const std::string name = key.empty() ? label : label + "#" + key;
        auto& values = groups[key];
        if (prices) {
            for (double p : values) {
                if (!(p > 0.0)) throw DataError("nonpositive price in " + name);
            }
            TradingDay day{{}, name, std::move(values), 0};
            out.push_back(compute_returns(day, options.horizon, options.stride));
        } else {
            out.emplace_back(std::move(values), 1.0, name);
        }
    }
    if (out.empty()) throw DataError("series CSV has no rows");
    return out;
}

OutputSet::~OutputSet() {
    if (committed_) return;
    std::error_code ec;
    for (const auto& s : staged_) std::filesystem::remove(s.temp, ec);
}

void OutputSet::add(const std::filesystem::path& path, const std::string& content) {
    auto temp = path;
    temp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(staged_.size());
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    {
        std::ofstream f(temp, std::ios::binary | std::ios::trunc);
        if (!f) throw Error("cannot open " + temp.string() + " for writing");
        staged_.push_back({path, temp});
        f << content;
        f.flush();
        if (!f) throw Error("failed writing " + temp.string());
    }
}

void OutputSet::commit() {
    for (const auto& s : staged_) std::filesystem::rename(s.temp, s.target);
    committed_ = true;
}

}  // namespace qcorr
