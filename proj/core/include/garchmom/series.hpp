#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace garchmom {

using Date = std::chrono::year_month_day;

Date parse_iso_date(std::string_view text);
std::string format_iso_date(Date d);

/// Consecutive weekdays starting at `first` (or the next weekday after it).
std::vector<Date> business_days(Date first, std::size_t count);

/// Closing prices of consecutive trading days.
class PriceSeries {
 public:
  /// Throws std::invalid_argument unless dates strictly increase, all prices
  /// are positive and finite, and there are at least two observations.
  PriceSeries(std::vector<Date> dates, std::vector<double> prices);

  std::size_t size() const noexcept { return prices_.size(); }
  const std::vector<Date>& dates() const noexcept { return dates_; }
  const std::vector<double>& prices() const noexcept { return prices_; }

 private:
  std::vector<Date> dates_;
  std::vector<double> prices_;
};

/// Log returns x(tau) = ln(y(tau + dt) / y(tau)), dated by the earlier day.
class ReturnSeries {
 public:
  ReturnSeries() = default;
  /// Throws std::invalid_argument on length mismatch, non-increasing dates or
  /// non-finite values.
  ReturnSeries(std::vector<Date> dates, std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  const std::vector<Date>& dates() const noexcept { return dates_; }
  const std::vector<double>& values() const noexcept { return values_; }

  /// Index of `d`, if it is one of the series dates.
  std::optional<std::size_t> index_of(Date d) const;

  ReturnSeries slice(std::size_t first, std::size_t count) const;

 private:
  std::vector<Date> dates_;
  std::vector<double> values_;
};

/// Sample statistics of a return series. gamma4 and gamma6 are always
/// populated; `higher` holds Gamma_8, Gamma_10, ... up to the requested order.
struct MomentSummary {
  double variance = 0.0;
  double gamma4 = 0.0;
  double gamma6 = 0.0;
  std::vector<double> higher;
  std::size_t sample_size = 0;

  /// Gamma_{2m} for m >= 2; throws std::out_of_range if not computed.
  double gamma(int two_m) const;
};

ReturnSeries log_returns(const PriceSeries& prices);

/// Inverse of log_returns given the first price; prices[0] == first_price.
std::vector<double> cumulate_prices(std::span<const double> returns,
                                    double first_price);

enum class WindowAlignment {
  centred,   // median observation of the window sits on the requested date
  trailing,  // window ends on the requested date
};

/// (1/N) sum x^n over the N observations positioned around index `center`.
/// For even N the centred window has the earlier of the two middle
/// observations at `center`.
double windowed_moment(const ReturnSeries& returns, int order,
                       std::size_t center, std::size_t window,
                       WindowAlignment alignment = WindowAlignment::centred);

double windowed_moment(const ReturnSeries& returns, int order, Date center,
                       std::size_t window,
                       WindowAlignment alignment = WindowAlignment::centred);

/// First index of the window used by windowed_moment.
std::size_t window_start(std::size_t center, std::size_t window,
                         WindowAlignment alignment);

/// Raw (uncentred) moments standardised by <x^2>^m. max_order is even, in
/// [4, 12]. Throws NumericalError on zero variance.
MomentSummary standardized_moments(std::span<const double> values,
                                   int max_order = 6);
MomentSummary standardized_moments(const ReturnSeries& returns,
                                   int max_order = 6);

/// Default window for the yearly moment curves, in trading days.
inline constexpr std::size_t kTradingYear = 252;

}  // namespace garchmom
