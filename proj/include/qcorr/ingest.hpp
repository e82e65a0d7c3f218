#pragma once

// Tick data preparation: second-grid resampling with previous-tick fill,
// session trimming, liquidity filtering, simple returns and an equally
// weighted index.

#include <cstdint>
#include <istream>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "qcorr/series.hpp"

namespace qcorr {

struct TickRecord {
    std::int64_t timestamp = 0;  // seconds since session open
    double price = 0.0;
    std::string instrument;
};

/// Session layout in seconds since open. The default is a 23400 s session
/// trimmed by 600 s at both ends, i.e. a 22200 s grid, with an 800-second
/// liquidity threshold.
struct SessionConfig {
    std::int64_t open = 0;
    std::int64_t close = 23400;
    std::int64_t trim = 600;
    std::size_t min_traded_seconds = 800;

    std::int64_t grid_start() const { return open + trim; }
    /// Number of grid seconds: [open + trim, close - trim).
    std::size_t grid_length() const;
};

inline constexpr std::size_t kStandardGridLength = 22200;

struct TradingDay {
    std::string instrument;
    std::string date;
    std::vector<double> prices;     // one per grid second
    std::size_t traded_seconds = 0;  // distinct seconds with at least one trade
};

struct Rejection {
    std::string instrument;
    std::string date;
    std::string reason;
};

using ResampleOutcome = std::variant<TradingDay, Rejection>;

/// Previous-tick fill onto the trimmed grid. Trades in the trimmed opening
/// window seed the first grid value. Throws DataError on unsorted ticks,
/// nonpositive prices or timestamps outside the session.
ResampleOutcome resample_day(std::span<const TickRecord> ticks, const std::string& date,
                             const SessionConfig& session = {});

/// r(t) = (S(t+h) - S(t)) / S(t) for t = 0, stride, ... with t + h <= last grid second.
TimeSeries compute_returns(const TradingDay& day, std::size_t horizon_seconds, std::size_t stride_seconds);

/// Equally weighted mean of day-normalized price paths S_k(t) / S_k(0).
/// Instruments are summed in sorted order, so the input order does not matter.
TradingDay build_index(std::span<const TradingDay> days);

/// Ticks of one (date, instrument) group, in file order.
struct TickGroup {
    std::string date;
    std::string instrument;
    std::vector<TickRecord> ticks;
};

/// Parses "date,time_seconds,instrument,price[,regular]" with a header row.
/// Rows whose regular flag is 0/false/n/no are dropped. Groups come back
/// sorted by (date, instrument).
std::vector<TickGroup> read_ticks_csv(std::istream& in);

struct IngestResult {
    std::vector<TradingDay> days;
    std::vector<Rejection> rejections;
};

IngestResult ingest(std::span<const TickGroup> groups, const SessionConfig& session = {});

}  // namespace qcorr
