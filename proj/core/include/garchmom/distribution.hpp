#pragma once

#include <array>
#include <optional>
#include <string>

#include "garchmom/mixture.hpp"

namespace garchmom {

/// Law of the unit-variance innovation z_t, described by its even moments
/// m_{2j} = E[z^{2j}] for j = 0..6.
class ConditionalDistribution {
 public:
  static constexpr int kMaxHalfOrder = 6;

  static ConditionalDistribution normal();
  static ConditionalDistribution mixture(const MixtureParams& params);

  bool is_normal() const noexcept { return !mixture_.has_value(); }
  const std::optional<MixtureParams>& mixture_params() const noexcept {
    return mixture_;
  }

  /// m_{2j}; j outside [0, 6] throws std::out_of_range.
  double moment(int j) const;
  double eta4() const noexcept { return moments_[2]; }
  double eta6() const noexcept { return moments_[3]; }

  std::string describe() const;

 private:
  ConditionalDistribution() = default;

  std::array<double, kMaxHalfOrder + 1> moments_{};
  std::optional<MixtureParams> mixture_;
};

/// (2j-1)!! as an exact integer, j in [0, 6]: 1, 1, 3, 15, 105, 945, 10395.
long long double_factorial_odd(int j);

}  // namespace garchmom
