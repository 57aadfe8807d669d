#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "garchmom/distribution.hpp"
#include "garchmom/garch.hpp"
#include "garchmom/scan.hpp"
#include "garchmom/series.hpp"

namespace garchmom {

struct TrajectoryPoint {
  double alpha1;
  double beta1;
};

/// The GARCH model on the (sigma_sq, gamma4) trajectory with intercept
/// alpha0:
///   r = alpha0 / sigma_sq,
///   alpha1^2 = (2r - r^2) (gamma4 - eta4) / (gamma4 (eta4 - 1)),
///   beta1 = 1 - r - alpha1.
/// Throws InfeasibleError when gamma4 <= eta4 or beta1 < 0 and
/// std::invalid_argument unless 0 < alpha0 < 2 sigma_sq.
TrajectoryPoint trajectory_point(double alpha0, double sigma_sq, double gamma4,
                                 const ConditionalDistribution& dist);

/// alpha0 at which the trajectory reaches beta1 = 0.
double trajectory_alpha0_max(double sigma_sq, double gamma4,
                             const ConditionalDistribution& dist);

struct TrajectorySample {
  double alpha0;
  double alpha1;
  double beta1;
  double gamma6;  // +inf outside the sixth-order region
  int existence_order;
};

struct Trajectory {
  double sigma_sq_emp;
  double gamma4_emp;
  ConditionalDistribution dist;
  std::vector<TrajectorySample> samples;  // strictly increasing alpha0
};

Trajectory trajectory(double sigma_sq, double gamma4,
                      const ConditionalDistribution& dist,
                      std::size_t resolution = 512);

struct Gamma6Range {
  double min;
  double max;  // +inf when the trajectory runs into the sixth-order line
};

/// Extremes of Gamma6 over the admissible part of the trajectory
/// (beta1 >= 0, sixth moment finite). Throws InfeasibleError when empty.
Gamma6Range gamma6_range_along_trajectory(double sigma_sq, double gamma4,
                                          const ConditionalDistribution& dist,
                                          int resolution = 512);

/// beta1 on the Gamma4 level curve at alpha1:
///   2 a b + b^2 = [G4 - eta4 - eta4 a^2 (G4 - 1)] / (G4 - eta4).
double level_curve_beta1(double alpha1, double gamma4,
                         const ConditionalDistribution& dist);

/// The normal-innovation special case sqrt(1 - 2a^2 - 6a^2/(G4-3)) - a.
double level_curve_beta1_normal(double alpha1, double gamma4);

/// Largest alpha1 on the level curve (where beta1 = 0).
double level_curve_alpha1_max(double gamma4, const ConditionalDistribution& dist);

/// Gamma6 profile along the Gamma4 level curve, parameterised by alpha1.
ScanProfile level_curve_profile(double gamma4, const ConditionalDistribution& dist,
                                int resolution = 512);

enum class FitMethod { trajectory, moment_match };

std::string_view to_string(FitMethod method);

struct FitOptions {
  int resolution = 512;
  double residual_tol = 1e-9;  // relative, on sigma^2, Gamma4 and Gamma6
};

struct Residuals {
  double sigma_sq;
  double gamma4;
  double gamma6;
};

struct FitResult {
  GarchParams params;
  ConditionalDistribution dist;
  FitMethod method;
  Residuals residuals;
  /// Every solution in ascending alpha0 (equivalently alpha1); params is the
  /// first one.
  std::vector<GarchParams> candidates;

  std::size_t root_count() const noexcept { return candidates.size(); }
};

/// Solves Gamma6(alpha0) = Gamma6_emp along the (sigma^2, Gamma4) trajectory.
FitResult fit_trajectory_intercept(const MomentSummary& moments,
                                   const ConditionalDistribution& dist,
                                   const FitOptions& options = {});

/// Solves Gamma6(alpha1, beta1(alpha1; Gamma4)) = Gamma6_emp, then
/// alpha0 = sigma^2 (1 - alpha1 - beta1).
FitResult fit_moment_match(const MomentSummary& moments,
                           const ConditionalDistribution& dist,
                           const FitOptions& options = {});

FitResult fit(const MomentSummary& moments, const ConditionalDistribution& dist,
              FitMethod method, const FitOptions& options = {});

/// Relative residuals of params against the target moments.
Residuals fit_residuals(const GarchParams& params,
                        const ConditionalDistribution& dist,
                        const MomentSummary& target);

}  // namespace garchmom
