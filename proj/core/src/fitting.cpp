#include "garchmom/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "garchmom/error.hpp"

namespace garchmom {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string num(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

// (gamma4 - eta4) / (gamma4 (eta4 - 1)): alpha1^2 per unit of (1 - s^2).
double curve_coefficient(double gamma4, const ConditionalDistribution& dist) {
  const double eta4 = dist.eta4();
  if (!(gamma4 > eta4)) {
    throw InfeasibleError("Gamma4 = " + num(gamma4) + " must exceed eta4 = " + num(eta4) +
                          " of the conditional distribution");
  }
  return (gamma4 - eta4) / (gamma4 * (eta4 - 1.0));
}

double relative(double value, double target) {
  if (!std::isfinite(value)) return kInf;
  return std::abs(value - target) / std::abs(target);
}

// Gamma6 in extended precision for the root-finding objectives. Near the iid
// corner both curves are flat enough that double rounding in Gamma6 shifts
// the root by ~1e-8 relative.
long double gamma6_ext(long double a1, long double b1, const ConditionalDistribution& dist) {
  static constexpr int kBinom[4][4] = {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
  long double mus[4] = {1.0L, 0.0L, 0.0L, 0.0L};
  long double sig[4] = {1.0L, 0.0L, 0.0L, 0.0L};
  for (int k = 1; k <= 3; ++k) {
    long double m = 0.0L;
    for (int j = 0; j <= k; ++j) {
      m += kBinom[k][j] * static_cast<long double>(dist.moment(j)) * std::pow(a1, j) *
           std::pow(b1, k - j);
    }
    if (!(m < 1.0L)) return std::numeric_limits<long double>::infinity();
    mus[k] = m;
    long double acc = 0.0L;
    for (int n = 0; n < k; ++n) acc += kBinom[k][n] * mus[n] * sig[n];
    sig[k] = acc / (1.0L - m);
  }
  const long double e2 = dist.moment(1) * sig[1];
  return dist.moment(3) * sig[3] / (e2 * e2 * e2);
}

double to_objective(long double g6) {
  return std::isfinite(g6) ? static_cast<double>(g6) : kInf;
}

bool degenerate_level(double gamma4, const ConditionalDistribution& dist) {
  return std::abs(gamma4 - dist.eta4()) <= 1e-12 * dist.eta4();
}

void check_moments(const MomentSummary& m) {
  if (!(m.variance > 0.0) || !std::isfinite(m.variance)) {
    throw std::invalid_argument("target variance must be positive");
  }
  if (!std::isfinite(m.gamma4) || !std::isfinite(m.gamma6)) {
    throw std::invalid_argument("target standardised moments must be finite");
  }
}

// alpha1 = beta1 = 0: x is the innovation scaled by sqrt(alpha0), so Gamma6 is
// pinned to eta6.
FitResult fit_iid_corner(const MomentSummary& m, const ConditionalDistribution& dist,
                         FitMethod method, const FitOptions& options) {
  if (relative(m.gamma6, dist.eta6()) > options.residual_tol) {
    throw InfeasibleError("Gamma4 equals eta4 = " + num(dist.eta4()) +
                          ", which forces Gamma6 = eta6 = " + num(dist.eta6()) + ", got " +
                          num(m.gamma6));
  }
  const GarchParams p{m.variance, 0.0, 0.0};
  return FitResult{p, dist, method, fit_residuals(p, dist, m), {p}};
}

FitResult finish(std::vector<GarchParams> candidates, const MomentSummary& m,
                 const ConditionalDistribution& dist, FitMethod method,
                 const FitOptions& options) {
  const GarchParams best = candidates.front();
  const Residuals r = fit_residuals(best, dist, m);
  const double worst = std::max({r.sigma_sq, r.gamma4, r.gamma6});
  if (!(worst <= options.residual_tol)) {
    throw NumericalError("root refinement left a relative moment residual of " + num(worst));
  }
  return FitResult{best, dist, method, r, std::move(candidates)};
}

}  // namespace

TrajectoryPoint trajectory_point(double alpha0, double sigma_sq, double gamma4,
                                 const ConditionalDistribution& dist) {
  if (!(sigma_sq > 0.0)) throw std::invalid_argument("sigma_sq must be positive");
  if (!(alpha0 > 0.0 && alpha0 < 2.0 * sigma_sq)) {
    throw std::invalid_argument("alpha0 must lie in (0, 2 sigma_sq)");
  }
  const double c = curve_coefficient(gamma4, dist);
  const double r = alpha0 / sigma_sq;
  const double alpha1 = std::sqrt((2.0 * r - r * r) * c);
  double beta1 = 1.0 - r - alpha1;
  if (beta1 < 0.0) {
    if (beta1 < -1e-12) {
      throw InfeasibleError("trajectory leaves the admissible quadrant: beta1 = " + num(beta1) +
                            " at alpha0 = " + num(alpha0));
    }
    beta1 = 0.0;
  }

  // 1 - s^2 carries an absolute rounding error of order 1e-16, i.e. a relative
  // one of 1e-16 / r.
  const double tol = 1e-9 + 1e-14 / r;
  const double g4 = garchmom::gamma4(alpha1, beta1, dist);
  const double var = alpha0 / (1.0 - alpha1 - beta1);
  if (relative(g4, gamma4) > tol || relative(var, sigma_sq) > tol) {
    throw NumericalError("trajectory point failed re-evaluation at alpha0 = " + num(alpha0));
  }
  return {alpha1, beta1};
}

double trajectory_alpha0_max(double sigma_sq, double gamma4,
                             const ConditionalDistribution& dist) {
  if (!(sigma_sq > 0.0)) throw std::invalid_argument("sigma_sq must be positive");
  const double c = curve_coefficient(gamma4, dist);
  return sigma_sq * (1.0 - std::sqrt(c / (1.0 + c)));
}

namespace {

ScalarFunction trajectory_gamma6(double sigma_sq, double gamma4,
                                 const ConditionalDistribution& dist) {
  const long double c = curve_coefficient(gamma4, dist);
  return [=](double alpha0) {
    if (!(alpha0 > 0.0 && alpha0 < 2.0 * sigma_sq)) return kInf;
    const long double r = static_cast<long double>(alpha0) / sigma_sq;
    const long double a1 = std::sqrt((2.0L * r - r * r) * c);
    long double b1 = 1.0L - r - a1;
    if (b1 < 0.0L) {
      if (b1 < -1e-12L) return kInf;
      b1 = 0.0L;
    }
    return to_objective(gamma6_ext(a1, b1, dist));
  };
}

}  // namespace

Trajectory trajectory(double sigma_sq, double gamma4, const ConditionalDistribution& dist,
                      std::size_t resolution) {
  if (resolution < 2) throw std::invalid_argument("resolution must be at least 2");
  const double hi = trajectory_alpha0_max(sigma_sq, gamma4, dist);
  Trajectory out{sigma_sq, gamma4, dist, {}};
  out.samples.reserve(resolution);
  for (std::size_t i = 1; i <= resolution; ++i) {
    const double alpha0 = hi * static_cast<double>(i) / static_cast<double>(resolution);
    const auto p = trajectory_point(alpha0, sigma_sq, gamma4, dist);
    const int order = moment_existence_order(p.alpha1, p.beta1, dist, 6);
    const double g6 = order >= 3 ? gamma6(p.alpha1, p.beta1, dist) : kInf;
    out.samples.push_back({alpha0, p.alpha1, p.beta1, g6, order});
  }
  return out;
}

Gamma6Range gamma6_range_along_trajectory(double sigma_sq, double gamma4,
                                          const ConditionalDistribution& dist,
                                          int resolution) {
  if (resolution < 100) throw std::invalid_argument("resolution must be at least 100");
  const double hi = trajectory_alpha0_max(sigma_sq, gamma4, dist);
  const auto profile = scan_profile(trajectory_gamma6(sigma_sq, gamma4, dist), 0.0, hi,
                                    resolution);
  if (profile.empty()) {
    throw InfeasibleError("empty trajectory: no admissible alpha0 keeps the sixth moment finite");
  }
  return {profile.min(), profile.max()};
}

double level_curve_beta1(double alpha1, double gamma4, const ConditionalDistribution& dist) {
  const double eta4 = dist.eta4();
  curve_coefficient(gamma4, dist);
  if (!(alpha1 >= 0.0)) throw std::invalid_argument("alpha1 must be non-negative");
  const double a2 = alpha1 * alpha1;
  const double q = (gamma4 - eta4 - eta4 * a2 * (gamma4 - 1.0)) / (gamma4 - eta4);
  const double disc = a2 + q;
  if (disc < 0.0) {
    throw InfeasibleError("alpha1 = " + num(alpha1) + " lies beyond the Gamma4 level curve");
  }
  double beta1 = std::sqrt(disc) - alpha1;
  if (beta1 < 0.0) {
    if (beta1 < -1e-12) {
      throw InfeasibleError("level curve has negative beta1 at alpha1 = " + num(alpha1));
    }
    beta1 = 0.0;
  }
  return beta1;
}

double level_curve_beta1_normal(double alpha1, double gamma4) {
  const double a2 = alpha1 * alpha1;
  return std::sqrt(1.0 - 2.0 * a2 - 6.0 * a2 / (gamma4 - 3.0)) - alpha1;
}

double level_curve_alpha1_max(double gamma4, const ConditionalDistribution& dist) {
  const double c = curve_coefficient(gamma4, dist);
  return std::sqrt(c / (1.0 + c));
}

namespace {

ScalarFunction level_curve_gamma6(double gamma4, const ConditionalDistribution& dist) {
  const long double eta4 = dist.eta4();
  const long double g4 = gamma4;
  return [=](double alpha1) {
    const long double a1 = alpha1;
    const long double a2 = a1 * a1;
    const long double q = (g4 - eta4 - eta4 * a2 * (g4 - 1.0L)) / (g4 - eta4);
    const long double disc = a2 + q;
    if (!(alpha1 >= 0.0) || disc < 0.0L) return kInf;
    long double b1 = std::sqrt(disc) - a1;
    if (b1 < 0.0L) {
      if (b1 < -1e-12L) return kInf;
      b1 = 0.0L;
    }
    return to_objective(gamma6_ext(a1, b1, dist));
  };
}

}  // namespace

ScanProfile level_curve_profile(double gamma4, const ConditionalDistribution& dist,
                                int resolution) {
  const double hi = level_curve_alpha1_max(gamma4, dist);
  return scan_profile(level_curve_gamma6(gamma4, dist), 0.0, hi, resolution);
}

std::string_view to_string(FitMethod method) {
  return method == FitMethod::trajectory ? "trajectory" : "moment_match";
}

Residuals fit_residuals(const GarchParams& params, const ConditionalDistribution& dist,
                        const MomentSummary& target) {
  try {
    const auto m = model_moments(params, dist, 3);
    return {relative(m.variance, target.variance), relative(m.gammas[0], target.gamma4),
            relative(m.gammas[1], target.gamma6)};
  } catch (const DivergentMomentError&) {
    return {kInf, kInf, kInf};
  }
}

FitResult fit_trajectory_intercept(const MomentSummary& moments,
                                   const ConditionalDistribution& dist,
                                   const FitOptions& options) {
  check_moments(moments);
  if (degenerate_level(moments.gamma4, dist)) {
    return fit_iid_corner(moments, dist, FitMethod::trajectory, options);
  }
  const double sigma_sq = moments.variance;
  const double hi = trajectory_alpha0_max(sigma_sq, moments.gamma4, dist);
  const auto f = trajectory_gamma6(sigma_sq, moments.gamma4, dist);
  const auto profile = scan_profile(f, 0.0, hi, options.resolution);
  if (profile.empty()) {
    throw InfeasibleError("empty trajectory: no admissible alpha0 keeps the sixth moment finite");
  }
  const auto roots = level_crossings(profile, f, moments.gamma6);
  if (roots.empty()) {
    throw OutOfRegionError("Gamma6 = " + num(moments.gamma6) +
                               " is outside the range [" + num(profile.min()) + ", " +
                               num(profile.max()) + "] along the trajectory",
                           profile.min(), profile.max());
  }
  std::vector<GarchParams> candidates;
  for (double alpha0 : roots) {
    const auto p = trajectory_point(alpha0, sigma_sq, moments.gamma4, dist);
    candidates.push_back({alpha0, p.alpha1, p.beta1});
  }
  return finish(std::move(candidates), moments, dist, FitMethod::trajectory, options);
}

FitResult fit_moment_match(const MomentSummary& moments, const ConditionalDistribution& dist,
                           const FitOptions& options) {
  check_moments(moments);
  if (degenerate_level(moments.gamma4, dist)) {
    return fit_iid_corner(moments, dist, FitMethod::moment_match, options);
  }
  const double gamma4 = moments.gamma4;
  const auto profile = level_curve_profile(gamma4, dist, options.resolution);
  if (profile.empty()) {
    throw OutOfRegionError("Gamma4 = " + num(gamma4) +
                               " is not attainable with a finite sixth moment",
                           kInf, -kInf);
  }
  const auto f = level_curve_gamma6(gamma4, dist);
  const auto roots = level_crossings(profile, f, moments.gamma6);
  if (roots.empty()) {
    throw OutOfRegionError("(Gamma4, Gamma6) = (" + num(gamma4) + ", " + num(moments.gamma6) +
                               ") is outside the region; attainable Gamma6 at this Gamma4 is [" +
                               num(profile.min()) + ", " + num(profile.max()) + "]",
                           profile.min(), profile.max());
  }
  std::vector<GarchParams> candidates;
  for (double alpha1 : roots) {
    const double beta1 = level_curve_beta1(alpha1, gamma4, dist);
    const double persistence = alpha1 + beta1;
    if (!(persistence < 1.0)) {
      throw InfeasibleError("alpha1 + beta1 >= 1 at the root gives a non-positive alpha0");
    }
    candidates.push_back({moments.variance * (1.0 - persistence), alpha1, beta1});
  }
  return finish(std::move(candidates), moments, dist, FitMethod::moment_match, options);
}

FitResult fit(const MomentSummary& moments, const ConditionalDistribution& dist,
              FitMethod method, const FitOptions& options) {
  return method == FitMethod::trajectory ? fit_trajectory_intercept(moments, dist, options)
                                         : fit_moment_match(moments, dist, options);
}

}  // namespace garchmom
