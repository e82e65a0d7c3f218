#include "qcorr/csv.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

#include "qcorr/error.hpp"

namespace qcorr {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string> split(std::string_view line) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        const auto comma = line.find(',', pos);
        out.emplace_back(trim(line.substr(pos, comma == std::string_view::npos ? comma : comma - pos)));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

std::string where(std::string_view what, std::size_t line) {
    return std::string(what) + " on line " + std::to_string(line);
}

}  // namespace

std::optional<std::size_t> CsvTable::find_column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    return std::nullopt;
}

std::size_t CsvTable::column(std::string_view name) const {
    if (auto c = find_column(name)) return *c;
    throw DataError("missing CSV column '" + std::string(name) + "'");
}

CsvTable read_csv(std::istream& in) {
    CsvTable table;
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        if (!have_header) {
            if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
            table.header = split(line);
            have_header = true;
            continue;
        }
        auto fields = split(line);
        if (fields.size() != table.header.size()) {
            throw DataError("expected " + std::to_string(table.header.size()) + " fields, got " +
                            std::to_string(fields.size()) + " on line " + std::to_string(lineno));
        }
        table.rows.push_back(std::move(fields));
    }
    if (!have_header) throw DataError("CSV input has no header row");
    return table;
}

double parse_real(std::string_view text, std::string_view what, std::size_t line) {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end) throw DataError("invalid " + where(what, line) + ": '" + std::string(text) + "'");
    return v;
}

std::int64_t parse_integer(std::string_view text, std::string_view what, std::size_t line) {
    std::int64_t v = 0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end) throw DataError("invalid " + where(what, line) + ": '" + std::string(text) + "'");
    return v;
}

std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace qcorr
