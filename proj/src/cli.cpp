#include "qcorr/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "qcorr/csv.hpp"
#include "qcorr/error.hpp"
#include "qcorr/io.hpp"
#include "qcorr/parallel.hpp"

namespace qcorr::cli {

namespace fs = std::filesystem;

namespace {

class UsageError : public Error {
public:
    using Error::Error;
};

using Pair = std::pair<ProbabilityLevel, ProbabilityLevel>;

std::string read_file(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot read " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void require_inputs(const std::vector<std::string>& inputs) {
    if (inputs.empty()) throw UsageError("at least one --input is required");
    for (const auto& in : inputs) {
        if (!fs::is_regular_file(in)) throw UsageError("input not found: " + in);
    }
}

void require_out(const std::string& out) {
    if (out.empty()) throw UsageError("--out is required");
}

void require_format(const std::string& format) {
    if (format != "csv" && format != "json") throw UsageError("--format must be csv or json");
}

std::string level_tag(double p) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", p);
    return buf;
}

// out.csv + "_x" -> out_x.csv
fs::path with_suffix(const fs::path& out, const std::string& suffix) {
    auto p = out;
    p.replace_filename(out.stem().string() + suffix + out.extension().string());
    return p;
}

fs::path with_extension(const fs::path& out, const std::string& ext) {
    auto p = out;
    p.replace_filename(out.stem().string() + ext);
    return p;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::vector<Pair> quantile_pairs(const std::vector<double>& alphas, const std::vector<double>& betas) {
    if (alphas.empty() && betas.empty()) {
        return {{ProbabilityLevel(0.05), ProbabilityLevel(0.05)}, {ProbabilityLevel(0.5), ProbabilityLevel(0.5)},
                {ProbabilityLevel(0.95), ProbabilityLevel(0.95)}, {ProbabilityLevel(0.05), ProbabilityLevel(0.5)},
                {ProbabilityLevel(0.5), ProbabilityLevel(0.95)}, {ProbabilityLevel(0.05), ProbabilityLevel(0.95)}};
    }
    if (alphas.size() != betas.size()) throw UsageError("--alpha and --beta must be given the same number of times");
    std::vector<Pair> pairs;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        for (double p : {alphas[i], betas[i]}) {
            if (!(p > 0.0 && p < 1.0)) throw UsageError("quantile levels must lie strictly inside (0, 1)");
        }
        pairs.emplace_back(ProbabilityLevel(alphas[i]), ProbabilityLevel(betas[i]));
    }
    return pairs;
}

std::vector<TimeSeries> load_series(const std::vector<std::string>& inputs, const SeriesInputOptions& opt) {
    std::vector<TimeSeries> all;
    for (const auto& in : inputs) {
        std::ifstream f(in);
        if (!f) throw DataError("cannot read " + in);
        for (auto& s : read_series_csv(f, fs::path(in).stem().string(), opt)) all.push_back(std::move(s));
    }
    return all;
}

std::uint64_t effective_seed(std::uint64_t flag_seed) {
    if (const char* env = std::getenv("QCORR_SEED"); env && *env) {
        try {
            std::size_t used = 0;
            const auto v = std::stoull(env, &used);
            if (used != std::string(env).size()) throw std::invalid_argument(env);
            return v;
        } catch (const std::exception&) {
            throw UsageError(std::string("QCORR_SEED is not an unsigned integer: ") + env);
        }
    }
    return flag_seed;
}

QcfCurve averaged_curve(const std::vector<TimeSeries>& series, const Pair& pair, int max_lag, std::size_t jobs) {
    std::vector<std::optional<QcfCurve>> slots(series.size());
    parallel_for(series.size(), jobs,
                 [&](std::size_t i) { slots[i] = qcf_fast(series[i], pair.first, pair.second, max_lag); });
    std::vector<QcfCurve> curves;
    curves.reserve(slots.size());
    for (auto& c : slots) curves.push_back(std::move(*c));
    return average_curves(curves);
}

void check_single(const std::vector<TimeSeries>& series, bool no_average) {
    if (no_average && series.size() != 1) {
        throw UsageError("--no-average needs exactly one series, got " + std::to_string(series.size()));
    }
}

// ---------------------------------------------------------------------------
// qcf

struct QcfOptions {
    std::vector<std::string> inputs;
    std::vector<double> alphas, betas;
    int max_lag = 100;
    std::size_t horizon = 60;
    std::size_t stride = 1;
    bool no_average = false;
    std::string out;
    std::string format = "csv";
    std::size_t jobs = default_jobs();
};

int run_qcf(const QcfOptions& o, std::ostream& report) {
    require_inputs(o.inputs);
    require_out(o.out);
    require_format(o.format);
    const auto pairs = quantile_pairs(o.alphas, o.betas);
    const auto series = load_series(o.inputs, {o.horizon, o.stride});
    check_single(series, o.no_average);

    const Pair reference{ProbabilityLevel(0.5), ProbabilityLevel(0.5)};
    const double band = confidence_band(averaged_curve(series, reference, o.max_lag, o.jobs));

    std::vector<QcfCurve> curves;
    for (const auto& pair : pairs) {
        auto c = averaged_curve(series, pair, o.max_lag, o.jobs);
        c.ci_half_width = band;
        curves.push_back(std::move(c));
    }

    OutputSet outputs;
    if (o.format == "json") {
        json doc;
        doc["n_series"] = series.size();
        doc["ci_half_width"] = band;
        doc["curves"] = json::array();
        for (const auto& c : curves) doc["curves"].push_back(curve_to_json(c));
        outputs.add(o.out, dump(doc));
    } else {
        for (const auto& c : curves) {
            std::ostringstream ss;
            write_curve_csv(ss, c);
            const fs::path target = curves.size() == 1 ? fs::path(o.out)
                                                       : with_suffix(o.out, "_a" + level_tag(c.alpha.value()) + "_b" +
                                                                                level_tag(c.beta.value()));
            outputs.add(target, ss.str());
        }
    }
    outputs.commit();
    report << "qcf: " << curves.size() << " curve(s) over " << series.size() << " series, ci=" << format_real(band)
           << '\n';
    return 0;
}

// ---------------------------------------------------------------------------
// ppgrid

struct GridOptions {
    std::vector<std::string> inputs;
    std::vector<double> levels;
    std::vector<int> lags;
    std::size_t horizon = 60;
    std::size_t stride = 1;
    bool no_average = false;
    std::string out;
    std::string format = "csv";
    std::size_t jobs = default_jobs();
};

int run_ppgrid(const GridOptions& o, std::ostream& report) {
    require_inputs(o.inputs);
    require_out(o.out);
    require_format(o.format);
    std::vector<ProbabilityLevel> levels;
    if (o.levels.empty()) {
        levels = default_pp_levels();
    } else {
        for (double p : o.levels) {
            if (!(p > 0.0 && p < 1.0)) throw UsageError("--levels must lie strictly inside (0, 1)");
            levels.emplace_back(p);
        }
    }
    const std::vector<int> lags = o.lags.empty() ? std::vector<int>{2, 10} : o.lags;
    const auto series = load_series(o.inputs, {o.horizon, o.stride});
    check_single(series, o.no_average);

    std::vector<PPGrid> grids;
    for (int lag : lags) {
        std::vector<std::optional<PPGrid>> slots(series.size());
        parallel_for(series.size(), o.jobs, [&](std::size_t i) { slots[i] = pp_grid(series[i], levels, lag); });
        std::vector<PPGrid> per_series;
        for (auto& g : slots) per_series.push_back(std::move(*g));
        grids.push_back(average_grids(per_series));
    }

    OutputSet outputs;
    if (o.format == "json") {
        json doc;
        doc["n_series"] = series.size();
        doc["grids"] = json::array();
        for (const auto& g : grids) doc["grids"].push_back(grid_to_json(g));
        outputs.add(o.out, dump(doc));
    } else {
        for (const auto& g : grids) {
            std::ostringstream ss;
            write_grid_csv(ss, g);
            const fs::path target =
                grids.size() == 1 ? fs::path(o.out) : with_suffix(o.out, "_lag" + std::to_string(g.lag));
            outputs.add(target, ss.str());
        }
    }
    outputs.commit();
    report << "ppgrid: " << grids.size() << " grid(s) of " << levels.size() << "x" << levels.size() << " over "
           << series.size() << " series\n";
    return 0;
}

// ---------------------------------------------------------------------------
// asym

struct AsymOptions {
    std::vector<std::string> inputs;
    std::vector<std::string> datasets;
    std::vector<std::string> years;
    double alpha = 0.05;
    double beta = 0.95;
    std::optional<int> area_lag;
    int max_lag = 100;
    std::size_t horizon = 60;
    std::size_t stride = 1;
    std::string out;
    std::string format = "csv";
    std::size_t jobs = default_jobs();
};

QcfCurve load_asym_curve(const std::string& path, const AsymOptions& o) {
    const ProbabilityLevel alpha(o.alpha), beta(o.beta);
    const auto text = read_file(path);
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        json doc;
        try {
            doc = json::parse(text);
        } catch (const json::exception& e) {
            throw DataError(path + ": " + e.what());
        }
        if (doc.contains("curves")) {
            for (const auto& j : doc.at("curves")) {
                auto c = curve_from_json(j);
                if (c.alpha == alpha && c.beta == beta) return c;
            }
            throw DataError(path + " holds no (" + level_tag(o.alpha) + ", " + level_tag(o.beta) + ") curve");
        }
        return curve_from_json(doc);
    }
    std::istringstream probe(text);
    const auto header = read_csv(probe).header;
    const bool is_curve = std::find(header.begin(), header.end(), "lag") != header.end() &&
                          std::find(header.begin(), header.end(), "qcf") != header.end();
    std::istringstream in(text);
    if (is_curve) return read_curve_csv(in, alpha, beta);
    auto series = read_series_csv(in, fs::path(path).stem().string(), {o.horizon, o.stride});
    return averaged_curve(series, {alpha, beta}, o.max_lag, o.jobs);
}

int run_asym(const AsymOptions& o, std::ostream& report) {
    require_inputs(o.inputs);
    require_format(o.format);
    if (!o.datasets.empty() && o.datasets.size() != o.inputs.size()) {
        throw UsageError("--dataset must be given once per --input");
    }
    if (!o.years.empty() && o.years.size() != o.inputs.size()) {
        throw UsageError("--year must be given once per --input");
    }

    struct Row {
        std::string dataset, year;
        AsymmetryReport report;
    };
    std::vector<Row> rows;
    for (std::size_t i = 0; i < o.inputs.size(); ++i) {
        const auto curve = load_asym_curve(o.inputs[i], o);
        Row row{o.datasets.empty() ? fs::path(o.inputs[i]).stem().string() : o.datasets[i],
                o.years.empty() ? std::string("-") : o.years[i], asymmetry(curve, o.area_lag)};
        rows.push_back(std::move(row));
    }

    std::ostringstream table;
    table << "Dataset,Year,DeltaA\n";
    for (const auto& r : rows) table << r.dataset << ',' << r.year << ',' << percent(r.report.delta) << '\n';

    json doc = json::array();
    for (const auto& r : rows) {
        auto j = asymmetry_to_json(r.report);
        j["dataset"] = r.dataset;
        j["year"] = r.year;
        j["delta_percent"] = percent(r.report.delta);
        doc.push_back(j);
    }

    report << table.str();
    for (const auto& r : rows) {
        if (r.report.zero_area) report << "warning: " << r.dataset << " has zero area on both sides\n";
    }
    if (!o.out.empty()) {
        OutputSet outputs;
        outputs.add(o.out, o.format == "json" ? dump(doc) : table.str());
        outputs.commit();
    }
    return 0;
}

// ---------------------------------------------------------------------------
// simulate / resim

struct ModelFlags {
    std::string model = "gjr";
    double mu = 0, omega = 0, alpha1 = 0, beta1 = 0, gamma1 = 0;
};

GarchParams params_from_flags(const ModelFlags& f, const CLI::App& app) {
    GarchParams p = demonstration_params(parse_model_kind(f.model));
    if (app.count("--mu")) p.mu = f.mu;
    if (app.count("--omega")) p.omega = f.omega;
    if (app.count("--alpha1")) p.alpha1 = f.alpha1;
    if (app.count("--beta1")) p.beta1 = f.beta1;
    if (app.count("--gamma1")) p.gamma1 = f.gamma1;
    if (p.kind == ModelKind::Garch) p.gamma1 = 0.0;
    return p;
}

struct SimOptions {
    ModelFlags model;
    std::size_t length = 5000;
    std::uint64_t seed = 0;
    std::size_t burn_in = kDefaultBurnIn;
    std::string out;
    std::string format = "csv";
};

int run_simulate(const SimOptions& o, const CLI::App& app, std::ostream& report) {
    require_out(o.out);
    require_format(o.format);
    const auto params = params_from_flags(o.model, app);
    const auto sim = simulate(params, o.length, effective_seed(o.seed), o.burn_in);

    OutputSet outputs;
    if (o.format == "json") {
        auto doc = simulation_sidecar(sim, params);
        doc["returns"] = std::vector<double>(sim.returns.values().begin(), sim.returns.values().end());
        doc["variances"] = sim.variances;
        outputs.add(o.out, dump(doc));
    } else {
        std::ostringstream ss;
        write_simulation_csv(ss, sim);
        outputs.add(o.out, ss.str());
        outputs.add(with_extension(o.out, ".json"), dump(simulation_sidecar(sim, params)));
    }
    outputs.commit();
    report << "simulate: " << to_string(params.kind) << " length=" << o.length << " seed=" << sim.seed << '\n';
    return 0;
}

struct ResimOptions {
    ModelFlags model;
    std::string params_file;
    std::string batch_file;
    std::size_t n_series = 250;
    std::size_t length = 370;
    std::uint64_t seed = 0;
    std::size_t burn_in = kDefaultBurnIn;
    std::string out;
    std::string format = "csv";
    std::size_t jobs = default_jobs();
};

int run_resim(const ResimOptions& o, const CLI::App& app, std::ostream& report) {
    require_out(o.out);
    require_format(o.format);
    if (!o.params_file.empty() && !o.batch_file.empty()) throw UsageError("use either --params or --batch");
    const auto seed = effective_seed(o.seed);

    std::vector<SimulationResult> sims;
    std::optional<GarchParams> params;
    if (!o.batch_file.empty()) {
        if (!fs::is_regular_file(o.batch_file)) throw UsageError("input not found: " + o.batch_file);
        std::ifstream f(o.batch_file);
        sims = resimulate_fits(read_fit_batch_csv(f), o.length, seed, o.burn_in, o.jobs);
    } else {
        if (!o.params_file.empty()) {
            if (!fs::is_regular_file(o.params_file)) throw UsageError("input not found: " + o.params_file);
            try {
                params = params_from_json(json::parse(read_file(o.params_file)));
            } catch (const json::parse_error& e) {
                throw DataError(o.params_file + ": " + e.what());
            }
        } else {
            params = params_from_flags(o.model, app);
        }
        sims = resimulate_experiment(*params, o.n_series, o.length, seed, o.burn_in, o.jobs);
    }

    OutputSet outputs;
    if (o.format == "json") {
        json doc;
        doc["seed"] = seed;
        doc["burn_in"] = o.burn_in;
        doc["generator"] = std::string(kGeneratorName);
        if (params) doc["params"] = params_to_json(*params);
        doc["series"] = json::array();
        for (const auto& s : sims) {
            doc["series"].push_back(
                json{{"seed", s.seed},
                     {"returns", std::vector<double>(s.returns.values().begin(), s.returns.values().end())},
                     {"variances", s.variances}});
        }
        outputs.add(o.out, dump(doc));
    } else {
        std::ostringstream ss;
        write_simulations_csv(ss, sims);
        outputs.add(o.out, ss.str());
    }
    outputs.commit();
    report << "resim: " << sims.size() << " series of length " << o.length << '\n';
    return 0;
}

// ---------------------------------------------------------------------------
// fit

struct FitOptionsCli {
    std::vector<std::string> inputs;
    std::size_t horizon = 60;
    std::optional<std::size_t> stride;
    bool admissible_only = false;
    std::string out;
    std::string format = "csv";
    std::size_t jobs = default_jobs();
};

int run_fit(const FitOptionsCli& o, std::ostream& report) {
    require_inputs(o.inputs);
    require_out(o.out);
    require_format(o.format);
    // Fits use non-overlapping returns unless told otherwise.
    const auto series = load_series(o.inputs, {o.horizon, o.stride.value_or(o.horizon)});
    const auto batch = fit_per_day(series, o.jobs);

    if (batch.fits.empty()) throw Error("no day converged; averaged parameters unavailable");
    const auto avg = average_params(batch, o.admissible_only);

    OutputSet outputs;
    if (o.format == "json") {
        json doc;
        doc["fits"] = json::array();
        for (const auto& [day, fit] : batch.fits) {
            auto j = params_to_json(fit.params);
            j["day"] = day;
            j["loglik"] = fit.log_likelihood;
            j["converged"] = fit.converged;
            j["iterations"] = fit.iterations;
            j["n_obs"] = fit.n_obs;
            doc["fits"].push_back(j);
        }
        doc["excluded"] = json::array();
        for (const auto& [day, reason] : batch.excluded) doc["excluded"].push_back({{"day", day}, {"reason", reason}});
        doc["average"] = params_to_json(avg);
        outputs.add(o.out, dump(doc));
    } else {
        std::ostringstream ss;
        write_fit_batch_csv(ss, batch);
        outputs.add(o.out, ss.str());
        std::ostringstream ex;
        ex << "day,reason\n";
        for (const auto& [day, reason] : batch.excluded) ex << day << ',' << reason << '\n';
        outputs.add(with_suffix(o.out, "_excluded"), ex.str());
        outputs.add(with_extension(o.out, ".params.json"), dump(params_to_json(avg)));
    }
    outputs.commit();
    report << "fit: " << batch.fits.size() << " converged, " << batch.excluded.size() << " excluded\n";
    return 0;
}

// ---------------------------------------------------------------------------
// ingest / index

struct IngestOptions {
    std::vector<std::string> inputs;
    std::int64_t open = 0;
    std::int64_t close = 23400;
    std::int64_t trim = 600;
    std::size_t min_traded = 800;
    std::string out;
};

SessionConfig session_of(const IngestOptions& o) { return {o.open, o.close, o.trim, o.min_traded}; }

std::vector<TickGroup> load_ticks(const std::vector<std::string>& inputs) {
    std::vector<TickGroup> groups;
    for (const auto& in : inputs) {
        std::ifstream f(in);
        if (!f) throw DataError("cannot read " + in);
        for (auto& g : read_ticks_csv(f)) groups.push_back(std::move(g));
    }
    return groups;
}

int run_ingest(const IngestOptions& o, bool build_indices, std::ostream& report) {
    require_inputs(o.inputs);
    require_out(o.out);
    const auto result = ingest(load_ticks(o.inputs), session_of(o));

    OutputSet outputs;
    const fs::path dir(o.out);
    std::size_t written = 0;
    if (build_indices) {
        std::map<std::string, std::vector<TradingDay>> by_date;
        for (const auto& d : result.days) by_date[d.date].push_back(d);
        for (const auto& [date, days] : by_date) {
            std::ostringstream ss;
            write_trading_day_csv(ss, build_index(days));
            outputs.add(dir / (date + "_INDEX.csv"), ss.str());
            ++written;
        }
    } else {
        for (const auto& d : result.days) {
            std::ostringstream ss;
            write_trading_day_csv(ss, d);
            outputs.add(dir / (d.date + "_" + d.instrument + ".csv"), ss.str());
            ++written;
        }
    }
    std::ostringstream rej;
    write_rejections_csv(rej, result.rejections);
    outputs.add(dir / "rejections.csv", rej.str());
    outputs.commit();
    report << (build_indices ? "index: " : "ingest: ") << written << " file(s), " << result.days.size()
           << " accepted day(s), " << result.rejections.size() << " rejected\n";
    return 0;
}

void add_io(CLI::App* sub, std::string& out, std::string& format) {
    sub->add_option("--out", out, "Output path");
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

void add_model(CLI::App* sub, ModelFlags& m) {
    sub->add_option("--model", m.model, "garch, egarch or gjr")->check(CLI::IsMember({"garch", "egarch", "gjr"}));
    sub->add_option("--mu", m.mu, "Drift per step");
    sub->add_option("--omega", m.omega);
    sub->add_option("--alpha1", m.alpha1);
    sub->add_option("--beta1", m.beta1);
    sub->add_option("--gamma1", m.gamma1);
}

void error_line(std::ostream& err, const std::string& kind, const std::string& message) {
    err << json{{"error", kind}, {"message", message}}.dump() << '\n';
}

}  // namespace

std::string percent(double fraction) {
    return std::to_string(std::lround(fraction * 100.0)) + "%";
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Quantile correlation functions of time series and GARCH-family comparisons", "qcorr"};
    app.require_subcommand(1);

    QcfOptions qo;
    auto* qcf_cmd = app.add_subcommand("qcf", "Averaged quantile correlation curves with a shared confidence band");
    qcf_cmd->add_option("--input", qo.inputs, "Series CSV (repeatable)");
    qcf_cmd->add_option("--alpha", qo.alphas, "First level of a quantile pair (repeatable)");
    qcf_cmd->add_option("--beta", qo.betas, "Second level of a quantile pair (repeatable)");
    qcf_cmd->add_option("--max-lag", qo.max_lag)->check(CLI::PositiveNumber);
    qcf_cmd->add_option("--horizon", qo.horizon, "Return horizon for price inputs (s)")->check(CLI::PositiveNumber);
    qcf_cmd->add_option("--stride", qo.stride, "Return stride for price inputs (s)")->check(CLI::PositiveNumber);
    qcf_cmd->add_flag("--no-average", qo.no_average, "Single-series analysis");
    qcf_cmd->add_option("--jobs", qo.jobs)->check(CLI::PositiveNumber);
    add_io(qcf_cmd, qo.out, qo.format);

    GridOptions go;
    auto* grid_cmd = app.add_subcommand("ppgrid", "Probability-probability grids at fixed lags");
    grid_cmd->add_option("--input", go.inputs);
    grid_cmd->add_option("--levels", go.levels, "Grid levels (comma separated)")->delimiter(',');
    grid_cmd->add_option("--lag", go.lags, "Fixed lag (repeatable)");
    grid_cmd->add_option("--horizon", go.horizon)->check(CLI::PositiveNumber);
    grid_cmd->add_option("--stride", go.stride)->check(CLI::PositiveNumber);
    grid_cmd->add_flag("--no-average", go.no_average);
    grid_cmd->add_option("--jobs", go.jobs)->check(CLI::PositiveNumber);
    add_io(grid_cmd, go.out, go.format);

    AsymOptions ao;
    int area_lag = 0;
    auto* asym_cmd = app.add_subcommand("asym", "Normalized area difference table");
    asym_cmd->add_option("--input", ao.inputs, "Curve CSV/JSON or series CSV (repeatable)");
    asym_cmd->add_option("--dataset", ao.datasets, "Dataset label per input");
    asym_cmd->add_option("--year", ao.years, "Year label per input");
    asym_cmd->add_option("--alpha", ao.alpha);
    asym_cmd->add_option("--beta", ao.beta);
    asym_cmd->add_option("--lag", area_lag, "Sum areas up to this lag (default: curve range)")
        ->check(CLI::PositiveNumber);
    asym_cmd->add_option("--max-lag", ao.max_lag, "Lag range when computing curves from series")
        ->check(CLI::PositiveNumber);
    asym_cmd->add_option("--horizon", ao.horizon)->check(CLI::PositiveNumber);
    asym_cmd->add_option("--stride", ao.stride)->check(CLI::PositiveNumber);
    asym_cmd->add_option("--jobs", ao.jobs)->check(CLI::PositiveNumber);
    add_io(asym_cmd, ao.out, ao.format);

    SimOptions so;
    auto* sim_cmd = app.add_subcommand("simulate", "Simulate a GARCH-family return series");
    add_model(sim_cmd, so.model);
    sim_cmd->add_option("--length", so.length)->check(CLI::Range(2, 1 << 30));
    sim_cmd->add_option("--seed", so.seed);
    sim_cmd->add_option("--burn-in", so.burn_in);
    add_io(sim_cmd, so.out, so.format);

    ResimOptions ro;
    auto* resim_cmd = app.add_subcommand("resim", "Simulate many series from one parameter set or a fit batch");
    add_model(resim_cmd, ro.model);
    resim_cmd->add_option("--params", ro.params_file, "Parameter JSON");
    resim_cmd->add_option("--batch", ro.batch_file, "Fit batch CSV: one series per converged day");
    resim_cmd->add_option("--n-series", ro.n_series)->check(CLI::PositiveNumber);
    resim_cmd->add_option("--length", ro.length)->check(CLI::Range(2, 1 << 30));
    resim_cmd->add_option("--seed", ro.seed);
    resim_cmd->add_option("--burn-in", ro.burn_in);
    resim_cmd->add_option("--jobs", ro.jobs)->check(CLI::PositiveNumber);
    add_io(resim_cmd, ro.out, ro.format);

    FitOptionsCli fo;
    std::size_t fit_stride = 0;
    auto* fit_cmd = app.add_subcommand("fit", "Per-day GJR-GARCH fits and averaged parameters");
    fit_cmd->add_option("--input", fo.inputs, "Series CSV; each series is one day (repeatable)");
    fit_cmd->add_option("--horizon", fo.horizon)->check(CLI::PositiveNumber);
    fit_cmd->add_option("--stride", fit_stride, "Return stride for price inputs (default: horizon)")
        ->check(CLI::PositiveNumber);
    fit_cmd->add_flag("--admissible-only", fo.admissible_only);
    fit_cmd->add_option("--jobs", fo.jobs)->check(CLI::PositiveNumber);
    add_io(fit_cmd, fo.out, fo.format);

    IngestOptions io_ingest, io_index;
    CLI::App* ingest_cmd = app.add_subcommand("ingest", "Resample tick CSV onto per-day second grids");
    CLI::App* index_cmd = app.add_subcommand("index", "Equally weighted index per date from tick CSV");
    for (auto [cmd, o] : {std::pair{ingest_cmd, &io_ingest}, std::pair{index_cmd, &io_index}}) {
        cmd->add_option("--input", o->inputs, "Tick CSV: date,time_seconds,instrument,price[,regular]");
        cmd->add_option("--out", o->out, "Output directory");
        cmd->add_option("--session-open", o->open);
        cmd->add_option("--session-close", o->close);
        cmd->add_option("--trim", o->trim, "Seconds dropped at each end of the session");
        cmd->add_option("--min-traded-seconds", o->min_traded);
    }

    std::vector<std::string> argv_store;
    argv_store.reserve(args.size() + 1);
    argv_store.push_back("qcorr");
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        error_line(err, "usage", e.what());
        return 2;
    }

    try {
        if (*qcf_cmd) return run_qcf(qo, out);
        if (*grid_cmd) return run_ppgrid(go, out);
        if (*asym_cmd) {
            if (asym_cmd->count("--lag")) ao.area_lag = area_lag;
            return run_asym(ao, out);
        }
        if (*sim_cmd) return run_simulate(so, *sim_cmd, out);
        if (*resim_cmd) return run_resim(ro, *resim_cmd, out);
        if (*fit_cmd) {
            if (fit_cmd->count("--stride")) fo.stride = fit_stride;
            return run_fit(fo, out);
        }
        if (*ingest_cmd) return run_ingest(io_ingest, false, out);
        if (*index_cmd) return run_ingest(io_index, true, out);
    } catch (const UsageError& e) {
        error_line(err, "usage", e.what());
        return 2;
    } catch (const DataError& e) {
        error_line(err, "data", e.what());
        return 1;
    } catch (const DegenerateLevel& e) {
        error_line(err, "degenerate_level", e.what());
        return 1;
    } catch (const InvalidArgument& e) {
        error_line(err, "invalid_argument", e.what());
        return 2;
    } catch (const std::exception& e) {
        error_line(err, "runtime", e.what());
        return 1;
    }
    return 2;
}

}  // namespace qcorr::cli
