#include "garchmom/series.hpp"

#include <algorithm>
#include <cstdio>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "garchmom/error.hpp"

namespace garchmom {
namespace {

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double ipow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

void check_dates(const std::vector<Date>& dates) {
  for (std::size_t i = 0; i < dates.size(); ++i) {
    if (!dates[i].ok()) throw std::invalid_argument("invalid calendar date");
    if (i > 0 && !(dates[i - 1] < dates[i])) {
      throw std::invalid_argument("dates must be strictly increasing at " +
                                  format_iso_date(dates[i]));
    }
  }
}

}  // namespace

Date parse_iso_date(std::string_view text) {
  auto field = [&](std::size_t pos, std::size_t len) {
    int v = 0;
    const char* first = text.data() + pos;
    const auto [ptr, ec] = std::from_chars(first, first + len, v);
    if (ec != std::errc() || ptr != first + len) {
      throw std::invalid_argument("bad ISO-8601 date '" + std::string(text) + "'");
    }
    return v;
  };
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
    throw std::invalid_argument("bad ISO-8601 date '" + std::string(text) + "'");
  }
  const Date d{std::chrono::year{field(0, 4)},
               std::chrono::month{static_cast<unsigned>(field(5, 2))},
               std::chrono::day{static_cast<unsigned>(field(8, 2))}};
  if (!d.ok()) {
    throw std::invalid_argument("no such date '" + std::string(text) + "'");
  }
  return d;
}

std::string format_iso_date(Date d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
  return buf;
}

std::vector<Date> business_days(Date first, std::size_t count) {
  using namespace std::chrono;
  std::vector<Date> out;
  out.reserve(count);
  sys_days day{first};
  while (out.size() < count) {
    const weekday wd{day};
    if (wd != Saturday && wd != Sunday) out.emplace_back(day);
    day += days{1};
  }
  return out;
}

PriceSeries::PriceSeries(std::vector<Date> dates, std::vector<double> prices)
    : dates_(std::move(dates)), prices_(std::move(prices)) {
  if (dates_.size() != prices_.size()) {
    throw std::invalid_argument("dates and prices differ in length");
  }
  if (prices_.size() < 2) {
    throw std::invalid_argument("a price series needs at least two prices");
  }
  check_dates(dates_);
  for (std::size_t i = 0; i < prices_.size(); ++i) {
    if (!(prices_[i] > 0.0) || !std::isfinite(prices_[i])) {
      throw std::invalid_argument("non-positive price on " +
                                  format_iso_date(dates_[i]));
    }
  }
}

ReturnSeries::ReturnSeries(std::vector<Date> dates, std::vector<double> values)
    : dates_(std::move(dates)), values_(std::move(values)) {
  if (dates_.size() != values_.size()) {
    throw std::invalid_argument("dates and returns differ in length");
  }
  check_dates(dates_);
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite return");
  }
}

std::optional<std::size_t> ReturnSeries::index_of(Date d) const {
  const auto it = std::lower_bound(dates_.begin(), dates_.end(), d);
  if (it == dates_.end() || *it != d) return std::nullopt;
  return static_cast<std::size_t>(it - dates_.begin());
}

ReturnSeries ReturnSeries::slice(std::size_t first, std::size_t count) const {
  if (first + count > size()) throw std::out_of_range("slice beyond series");
  return ReturnSeries(
      std::vector<Date>(dates_.begin() + first, dates_.begin() + first + count),
      std::vector<double>(values_.begin() + first, values_.begin() + first + count));
}

double MomentSummary::gamma(int two_m) const {
  if (two_m == 4) return gamma4;
  if (two_m == 6) return gamma6;
  const int idx = (two_m - 8) / 2;
  if (two_m % 2 != 0 || idx < 0 || idx >= static_cast<int>(higher.size())) {
    throw std::out_of_range("standardised moment of order " +
                            std::to_string(two_m) + " not computed");
  }
  return higher[idx];
}

ReturnSeries log_returns(const PriceSeries& prices) {
  const auto& p = prices.prices();
  std::vector<double> values(p.size() - 1);
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    values[i] = std::log(p[i + 1] / p[i]);
  }
  std::vector<Date> dates(prices.dates().begin(), prices.dates().end() - 1);
  return ReturnSeries(std::move(dates), std::move(values));
}

std::vector<double> cumulate_prices(std::span<const double> returns,
                                    double first_price) {
  std::vector<double> out;
  out.reserve(returns.size() + 1);
  out.push_back(first_price);
  double log_price = std::log(first_price);
  for (double r : returns) {
    log_price += r;
    out.push_back(std::exp(log_price));
  }
  return out;
}

std::size_t window_start(std::size_t center, std::size_t window,
                         WindowAlignment alignment) {
  const std::size_t back =
      alignment == WindowAlignment::centred ? (window - 1) / 2 : window - 1;
  if (center < back) {
    throw std::out_of_range("window extends before the start of the series");
  }
  return center - back;
}

double windowed_moment(const ReturnSeries& returns, int order,
                       std::size_t center, std::size_t window,
                       WindowAlignment alignment) {
  if (order <= 0 || order % 2 != 0) {
    throw std::invalid_argument("only positive even moment orders are supported");
  }
  if (window < 2) throw std::invalid_argument("window must hold at least 2 returns");
  if (center >= returns.size()) throw std::out_of_range("window centre outside series");
  const std::size_t first = window_start(center, window, alignment);
  if (first + window > returns.size()) {
    throw std::out_of_range("window extends beyond the end of the series");
  }
  CompensatedSum sum;
  for (std::size_t i = first; i < first + window; ++i) {
    sum.add(ipow(returns.values()[i], order));
  }
  return sum.value() / static_cast<double>(window);
}

double windowed_moment(const ReturnSeries& returns, int order, Date center,
                       std::size_t window, WindowAlignment alignment) {
  const auto idx = returns.index_of(center);
  if (!idx) {
    throw std::out_of_range("date " + format_iso_date(center) + " not in series");
  }
  return windowed_moment(returns, order, *idx, window, alignment);
}

MomentSummary standardized_moments(std::span<const double> values, int max_order) {
  if (max_order < 4 || max_order > 12 || max_order % 2 != 0) {
    throw std::invalid_argument("max_order must be one of 4, 6, 8, 10, 12");
  }
  const int top = std::max(max_order, 6) / 2;
  if (values.size() < static_cast<std::size_t>(2 * top)) {
    throw std::invalid_argument("series too short for the requested order");
  }
  std::vector<CompensatedSum> sums(top + 1);
  for (double x : values) {
    const double x2 = x * x;
    double p = x2;
    for (int m = 1; m <= top; ++m) {
      sums[m].add(p);
      p *= x2;
    }
  }
  const double n = static_cast<double>(values.size());
  const double m2 = sums[1].value() / n;
  if (!(m2 > 0.0)) throw NumericalError("zero variance: series is constant");

  MomentSummary out;
  out.variance = m2;
  out.sample_size = values.size();
  auto gamma = [&](int m) { return (sums[m].value() / n) / std::pow(m2, m); };
  out.gamma4 = gamma(2);
  out.gamma6 = gamma(3);
  for (int m = 4; m <= max_order / 2; ++m) out.higher.push_back(gamma(m));
  return out;
}

MomentSummary standardized_moments(const ReturnSeries& returns, int max_order) {
  return standardized_moments(std::span<const double>(returns.values()), max_order);
}

}  // namespace garchmom
