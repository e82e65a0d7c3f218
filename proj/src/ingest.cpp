#include "qcorr/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "qcorr/csv.hpp"
#include "qcorr/error.hpp"

namespace qcorr {

std::size_t SessionConfig::grid_length() const {
    const auto len = close - open - 2 * trim;
    if (trim < 0 || len <= 0) throw InvalidArgument("session leaves no grid seconds after trimming");
    return static_cast<std::size_t>(len);
}

ResampleOutcome resample_day(std::span<const TickRecord> ticks, const std::string& date,
                             const SessionConfig& session) {
    const std::size_t n = session.grid_length();
    const std::string instrument = ticks.empty() ? std::string{} : ticks.front().instrument;

    std::set<std::int64_t> seconds;
    for (std::size_t i = 0; i < ticks.size(); ++i) {
        const auto& t = ticks[i];
        if (!(t.price > 0.0) || !std::isfinite(t.price)) {
            throw DataError("nonpositive price at tick " + std::to_string(i) + " (" + instrument + " " + date + ")");
        }
        if (t.timestamp < session.open || t.timestamp > session.close) {
            throw DataError("tick " + std::to_string(i) + " outside session (" + instrument + " " + date + ")");
        }
        if (i > 0 && t.timestamp < ticks[i - 1].timestamp) {
            throw DataError("unsorted ticks at index " + std::to_string(i) + " (" + instrument + " " + date + ")");
        }
        seconds.insert(t.timestamp);
    }

    if (seconds.size() < session.min_traded_seconds) {
        return Rejection{instrument, date, "insufficient liquidity"};
    }

    const std::int64_t start = session.grid_start();
    if (ticks.empty() || ticks.front().timestamp > start) {
        return Rejection{instrument, date, "no price before grid start"};
    }

    TradingDay day{instrument, date, std::vector<double>(n), seconds.size()};
    std::size_t k = 0;
    double last = 0.0;
    for (std::size_t g = 0; g < n; ++g) {
        const std::int64_t sec = start + static_cast<std::int64_t>(g);
        while (k < ticks.size() && ticks[k].timestamp <= sec) last = ticks[k++].price;
        day.prices[g] = last;
    }
    return day;
}

TimeSeries compute_returns(const TradingDay& day, std::size_t horizon_seconds, std::size_t stride_seconds) {
    const std::size_t n = day.prices.size();
    if (horizon_seconds == 0 || stride_seconds == 0) {
        throw InvalidArgument("horizon and stride must be positive");
    }
    if (horizon_seconds + 1 > n) {
        throw InvalidArgument("horizon " + std::to_string(horizon_seconds) + " exceeds the " + std::to_string(n) +
                              "-second grid");
    }
    std::vector<double> r;
    r.reserve((n - horizon_seconds) / stride_seconds + 1);
    for (std::size_t t = 0; t + horizon_seconds <= n - 1; t += stride_seconds) {
        r.push_back((day.prices[t + horizon_seconds] - day.prices[t]) / day.prices[t]);
    }
    std::string label = day.date;
    if (!day.instrument.empty()) label += (label.empty() ? "" : "_") + day.instrument;
    return TimeSeries(std::move(r), static_cast<double>(stride_seconds), std::move(label));
}

TradingDay build_index(std::span<const TradingDay> days) {
    if (days.empty()) throw InvalidArgument("index needs at least one instrument");
    const auto& first = days.front();
    for (const auto& d : days) {
        if (d.date != first.date) throw InvalidArgument("index constituents span different dates");
        if (d.prices.size() != first.prices.size()) throw InvalidArgument("index constituents differ in grid length");
        if (d.prices.empty() || !(d.prices.front() > 0.0)) throw InvalidArgument("constituent has no opening price");
    }

    std::vector<const TradingDay*> order;
    for (const auto& d : days) order.push_back(&d);
    std::sort(order.begin(), order.end(), [](const TradingDay* a, const TradingDay* b) {
        if (a->instrument != b->instrument) return a->instrument < b->instrument;
        return a->prices < b->prices;
    });

    TradingDay index{"INDEX", first.date, std::vector<double>(first.prices.size(), 0.0), first.traded_seconds};
    for (const auto* d : order) {
        const double base = d->prices.front();
        for (std::size_t t = 0; t < d->prices.size(); ++t) index.prices[t] += d->prices[t] / base;
        index.traded_seconds = std::min(index.traded_seconds, d->traded_seconds);
    }
    const double k = static_cast<double>(days.size());
    for (auto& p : index.prices) p /= k;
    return index;
}

namespace {

bool regular_flag(std::string v) {
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
    if (v.empty() || v == "1" || v == "true" || v == "y" || v == "yes") return true;
    if (v == "0" || v == "false" || v == "n" || v == "no") return false;
    throw DataError("unrecognized regular flag '" + v + "'");
}

}  // namespace

std::vector<TickGroup> read_ticks_csv(std::istream& in) {
    const auto table = read_csv(in);
    const auto date_col = table.column("date");
    const auto time_col = table.column("time_seconds");
    const auto inst_col = table.column("instrument");
    const auto price_col = table.column("price");
    const auto regular_col = table.find_column("regular");

    std::map<std::pair<std::string, std::string>, std::vector<TickRecord>> groups;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        if (regular_col && !regular_flag(row[*regular_col])) continue;
        TickRecord tick;
        tick.timestamp = parse_integer(row[time_col], "time_seconds", i + 2);
        tick.price = parse_real(row[price_col], "price", i + 2);
        tick.instrument = row[inst_col];
        groups[{row[date_col], tick.instrument}].push_back(std::move(tick));
    }
    std::vector<TickGroup> out;
    out.reserve(groups.size());
    for (auto& [key, ticks] : groups) out.push_back({key.first, key.second, std::move(ticks)});
    return out;
}

IngestResult ingest(std::span<const TickGroup> groups, const SessionConfig& session) {
    IngestResult result;
    for (const auto& g : groups) {
        auto outcome = resample_day(g.ticks, g.date, session);
        if (auto* day = std::get_if<TradingDay>(&outcome)) {
            day->instrument = g.instrument;
            result.days.push_back(std::move(*day));
        } else {
            auto rej = std::get<Rejection>(std::move(outcome));
            rej.instrument = g.instrument;
            result.rejections.push_back(std::move(rej));
        }
    }
    return result;
}

}  // namespace qcorr
