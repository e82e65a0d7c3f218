#pragma once

// CSV / JSON serialization of curves, grids, simulations, fits and trading days.

#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "qcorr/garch.hpp"
#include "qcorr/gjr_fit.hpp"
#include "qcorr/ingest.hpp"
#include "qcorr/qcf.hpp"

#include <json.hpp>

namespace qcorr {

using json = nlohmann::json;

// Curves: "lag,qcf,ci" (ci repeated on every row; "lag,qcf" when absent).
void write_curve_csv(std::ostream& out, const QcfCurve& curve);
json curve_to_json(const QcfCurve& curve);
QcfCurve curve_from_json(const json& j);
/// CSV carries no quantile metadata; the caller supplies the pair.
QcfCurve read_curve_csv(std::istream& in, ProbabilityLevel alpha, ProbabilityLevel beta);

// Grids: header "alpha\beta,<beta levels...>", one row per alpha level.
void write_grid_csv(std::ostream& out, const PPGrid& grid);
json grid_to_json(const PPGrid& grid);

json params_to_json(const GarchParams& params);
GarchParams params_from_json(const json& j);

void write_simulation_csv(std::ostream& out, const SimulationResult& sim);
json simulation_sidecar(const SimulationResult& sim, const GarchParams& params);
/// Batch form with a leading series column: "series,t,return,variance".
void write_simulations_csv(std::ostream& out, const std::vector<SimulationResult>& sims);

void write_fit_batch_csv(std::ostream& out, const FitBatch& batch);
FitBatch read_fit_batch_csv(std::istream& in);

void write_trading_day_csv(std::ostream& out, const TradingDay& day);
TradingDay read_trading_day_csv(std::istream& in, std::string instrument = {}, std::string date = {});
void write_rejections_csv(std::ostream& out, const std::vector<Rejection>& rejections);

json asymmetry_to_json(const AsymmetryReport& report);

/// How to turn a price column into returns when an input holds prices.
struct SeriesInputOptions {
    std::size_t horizon = 60;
    std::size_t stride = 1;
};

/// Reads one or more series from CSV. Values come from the first of the
/// columns "return", "value", "price" (prices are converted to simple
/// returns); a lone column is used whatever its name. A "series" column
/// splits the rows into several series, labelled by its value.
std::vector<TimeSeries> read_series_csv(std::istream& in, const std::string& label,
                                        const SeriesInputOptions& options = {});

/// Files staged as temporaries and renamed into place together on commit();
/// anything not committed is removed on destruction.
class OutputSet {
public:
    OutputSet() = default;
    OutputSet(const OutputSet&) = delete;
    OutputSet& operator=(const OutputSet&) = delete;
    ~OutputSet();

    void add(const std::filesystem::path& path, const std::string& content);
    void commit();

private:
    struct Staged {
        std::filesystem::path target;
        std::filesystem::path temp;
    };
    std::vector<Staged> staged_;
    bool committed_ = false;
};

}  // namespace qcorr
