#pragma once

#include <iosfwd>
#include <string>
#include <variant>

#include "garchmom/series.hpp"

namespace garchmom {

/// `date,close` price file or `date,return` returns file, header required.
using SeriesFile = std::variant<PriceSeries, ReturnSeries>;

/// Parses either layout, selected by the second header column. Malformed rows
/// raise IoError naming the 1-based line number.
SeriesFile read_series_csv(std::istream& in);
SeriesFile read_series_csv(const std::string& path);

/// Returns of a file, computing log returns when it holds prices.
ReturnSeries returns_of(const SeriesFile& file);

void write_prices_csv(std::ostream& out, const PriceSeries& prices);
void write_returns_csv(std::ostream& out, const ReturnSeries& returns);

/// Shortest representation that round-trips to the same double.
std::string format_double(double value);

}  // namespace garchmom
