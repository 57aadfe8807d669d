#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "garchmom/distribution.hpp"
#include "garchmom/garch.hpp"
#include "garchmom/series.hpp"

namespace garchmom {

struct SimConfig {
  GarchParams params;
  ConditionalDistribution dist = ConditionalDistribution::normal();
  std::size_t n_steps = 0;
  std::size_t burn_in = 10'000;
  std::uint64_t seed = 0;
  /// Abort once sigma_t^2 exceeds variance_cap times the initial variance.
  double variance_cap = 1e12;
  Date start_date = Date{std::chrono::year{2000}, std::chrono::January,
                         std::chrono::day{3}};

  void validate() const;
};

/// Iterates the variance recurrence from the unconditional variance (or
/// alpha0 when alpha1 + beta1 >= 1), drops burn_in steps and returns n_steps
/// returns dated on consecutive business days. Deterministic in the seed.
ReturnSeries simulate_garch(const SimConfig& config);

std::vector<double> simulate_returns(const SimConfig& config);

/// Moments of a sample with batch-means standard errors (delta method on the
/// batch means of x^2, x^4, ...).
struct MomentEstimate {
  MomentSummary summary;
  double se_variance = 0.0;
  double se_gamma4 = 0.0;
  double se_gamma6 = 0.0;
  std::vector<double> se_higher;
  int batches = 0;

  double standard_error(int two_m) const;
  double relative_se(int two_m) const;
  /// False when the relative SE exceeds 20%; assertions should be skipped.
  bool reliable(int two_m) const;
};

inline constexpr int kDefaultBatches = 32;
inline constexpr double kMaxReliableRelativeSe = 0.2;

MomentEstimate batch_means_estimate(std::span<const double> values,
                                    int max_order = 6,
                                    int batches = kDefaultBatches);

/// simulate_returns then batch_means_estimate. Requires n_steps >= 1e4.
MomentEstimate mc_moment_estimate(const SimConfig& config, int max_order = 6);

}  // namespace garchmom
