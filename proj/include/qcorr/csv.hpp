#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qcorr {

/// Minimal comma-separated table: a header row plus data rows of equal width.
/// No quoting; surrounding whitespace and CR are stripped.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::optional<std::size_t> find_column(std::string_view name) const;
    /// Throws DataError when the column is missing.
    std::size_t column(std::string_view name) const;
};

CsvTable read_csv(std::istream& in);

double parse_real(std::string_view text, std::string_view what, std::size_t line);
std::int64_t parse_integer(std::string_view text, std::string_view what, std::size_t line);

/// 17 significant digits, round-trip exact.
std::string format_real(double v);

}  // namespace qcorr
