#include "garchmom/rolling.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "garchmom/csv.hpp"
#include "garchmom/error.hpp"
#include "garchmom/parallel.hpp"

namespace garchmom {

void WindowSpec::validate() const {
  if (length < 30) throw std::invalid_argument("window length must be at least 30 days");
  if (step < 1) throw std::invalid_argument("window step must be at least 1 day");
}

std::string_view to_string(WindowStatus status) {
  switch (status) {
    case WindowStatus::ok:
      return "ok";
    case WindowStatus::infeasible:
      return "infeasible";
    case WindowStatus::out_of_region:
      return "out_of_region";
  }
  return "unknown";
}

std::size_t window_count(std::size_t series_length, const WindowSpec& window) {
  if (series_length < window.length) return 0;
  return (series_length - window.length) / window.step + 1;
}

std::vector<WindowFit> rolling_fit(const ReturnSeries& returns, const WindowSpec& window,
                                   const ConditionalDistribution& dist,
                                   const FitOptions& options, unsigned threads) {
  window.validate();
  const std::size_t count = window_count(returns.size(), window);
  if (count == 0) {
    throw std::invalid_argument("window of " + std::to_string(window.length) +
                                " days is longer than the series (" +
                                std::to_string(returns.size()) + " returns)");
  }

  std::vector<WindowFit> fits(count);
  parallel_for(
      count,
      [&](std::size_t k) {
        WindowFit& w = fits[k];
        w.first_index = k * window.step;
        w.median_date = returns.dates()[w.first_index + (window.length - 1) / 2];
        w.status = WindowStatus::infeasible;
        const std::span<const double> values(returns.values().data() + w.first_index,
                                             window.length);
        try {
          w.moments = standardized_moments(values, 6);
          const auto result = fit_trajectory_intercept(*w.moments, dist, options);
          w.params = result.params;
          w.status = WindowStatus::ok;
        } catch (const OutOfRegionError& e) {
          w.status = WindowStatus::out_of_region;
          w.reason = e.what();
        } catch (const Error& e) {
          w.reason = e.what();
        }
      },
      threads);
  return fits;
}

void write_rolling_csv(std::ostream& out, const std::vector<WindowFit>& fits) {
  out << "median_date,sigma_sq,gamma4,gamma6,alpha0,alpha1,beta1,status\n";
  for (const auto& w : fits) {
    out << format_iso_date(w.median_date) << ',';
    if (w.moments) {
      out << format_double(w.moments->variance) << ',' << format_double(w.moments->gamma4)
          << ',' << format_double(w.moments->gamma6) << ',';
    } else {
      out << ",,,";
    }
    if (w.params) {
      out << format_double(w.params->alpha0) << ',' << format_double(w.params->alpha1) << ','
          << format_double(w.params->beta1) << ',';
    } else {
      out << ",,,";
    }
    out << to_string(w.status) << '\n';
  }
}

TruncationSweep truncation_sweep(const ReturnSeries& returns, std::span<const double> percents,
                                 int max_order) {
  TruncationSweep sweep;
  const std::size_t n = returns.size();
  for (double pct : percents) {
    if (!(pct > 0.0 && pct <= 100.0)) {
      throw std::invalid_argument("truncation fractions must lie in (0, 100]");
    }
    const auto len = static_cast<std::size_t>(std::floor(n * pct / 100.0 + 1e-9));
    if (len < kMinTruncationLength) {
      sweep.notices.push_back("skipped " + format_double(pct) + "%: prefix of " +
                              std::to_string(len) + " returns is shorter than " +
                              std::to_string(kMinTruncationLength));
      continue;
    }
    try {
      sweep.points.push_back(
          {pct, len, standardized_moments(std::span(returns.values().data(), len), max_order)});
    } catch (const NumericalError& e) {
      sweep.notices.push_back("skipped " + format_double(pct) + "%: " + e.what());
    }
  }
  return sweep;
}

}  // namespace garchmom
