#include "garchmom/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "garchmom/error.hpp"

namespace garchmom {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
  throw IoError("line " + std::to_string(line) + ": " + msg);
}

double parse_number(std::string_view text, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    fail(line, "cannot parse number '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace

SeriesFile read_series_csv(std::istream& in) {
  std::string row;
  std::size_t line = 0;
  bool is_prices = true;
  for (;;) {
    if (!std::getline(in, row)) throw IoError("empty input: header `date,close` expected");
    ++line;
    if (!trim(row).empty()) break;
  }
  {
    const std::string_view header = trim(row);
    if (header == "date,close") {
      is_prices = true;
    } else if (header == "date,return") {
      is_prices = false;
    } else {
      fail(line, "header must be `date,close` or `date,return`, got '" +
                     std::string(header) + "'");
    }
  }

  std::vector<Date> dates;
  std::vector<double> values;
  while (std::getline(in, row)) {
    ++line;
    const std::string_view text = trim(row);
    if (text.empty()) continue;
    const auto comma = text.find(',');
    if (comma == std::string_view::npos || text.find(',', comma + 1) != std::string_view::npos) {
      fail(line, "expected two comma-separated fields");
    }
    Date d;
    try {
      d = parse_iso_date(trim(text.substr(0, comma)));
    } catch (const std::invalid_argument& e) {
      fail(line, e.what());
    }
    const double v = parse_number(trim(text.substr(comma + 1)), line);
    if (!dates.empty() && !(dates.back() < d)) fail(line, "dates must strictly increase");
    if (is_prices && !(v > 0.0)) fail(line, "close price must be positive");
    dates.push_back(d);
    values.push_back(v);
  }

  try {
    if (is_prices) return PriceSeries(std::move(dates), std::move(values));
    return ReturnSeries(std::move(dates), std::move(values));
  } catch (const std::invalid_argument& e) {
    throw IoError(e.what());
  }
}

SeriesFile read_series_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return read_series_csv(in);
}

ReturnSeries returns_of(const SeriesFile& file) {
  if (const auto* prices = std::get_if<PriceSeries>(&file)) return log_returns(*prices);
  return std::get<ReturnSeries>(file);
}

std::string format_double(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

void write_prices_csv(std::ostream& out, const PriceSeries& prices) {
  out << "date,close\n";
  for (std::size_t i = 0; i < prices.size(); ++i) {
    out << format_iso_date(prices.dates()[i]) << ',' << format_double(prices.prices()[i])
        << '\n';
  }
}

void write_returns_csv(std::ostream& out, const ReturnSeries& returns) {
  out << "date,return\n";
  for (std::size_t i = 0; i < returns.size(); ++i) {
    out << format_iso_date(returns.dates()[i]) << ',' << format_double(returns.values()[i])
        << '\n';
  }
}

}  // namespace garchmom
