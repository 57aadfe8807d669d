#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "garchmom/fitting.hpp"
#include "garchmom/series.hpp"

namespace garchmom {

struct WindowSpec {
  std::size_t length = 126;  // T, trading days
  std::size_t step = 1;      // shift between windows

  /// Throws std::invalid_argument unless length >= 30 and step >= 1.
  void validate() const;
};

enum class WindowStatus { ok, infeasible, out_of_region };

std::string_view to_string(WindowStatus status);

struct WindowFit {
  Date median_date;
  std::size_t first_index;
  std::optional<MomentSummary> moments;  // absent for degenerate windows
  std::optional<GarchParams> params;     // present iff status == ok
  WindowStatus status;
  std::string reason;
};

std::size_t window_count(std::size_t series_length, const WindowSpec& window);

/// Fits every window by trajectory intercept with a fixed distribution. Per
/// window failures become statuses; only a window longer than the series
/// throws. Results are in window order whatever the thread count.
std::vector<WindowFit> rolling_fit(const ReturnSeries& returns,
                                   const WindowSpec& window,
                                   const ConditionalDistribution& dist,
                                   const FitOptions& options = {},
                                   unsigned threads = 0);

/// `median_date,sigma_sq,gamma4,gamma6,alpha0,alpha1,beta1,status`.
void write_rolling_csv(std::ostream& out, const std::vector<WindowFit>& fits);

struct TruncationPoint {
  double percent;
  std::size_t length;
  MomentSummary moments;
};

struct TruncationSweep {
  std::vector<TruncationPoint> points;
  std::vector<std::string> notices;
};

inline constexpr std::size_t kMinTruncationLength = 30;

/// Moments of the prefixes holding floor(len * p / 100) observations.
TruncationSweep truncation_sweep(const ReturnSeries& returns,
                                 std::span<const double> percents,
                                 int max_order = 6);

}  // namespace garchmom
