#pragma once

#include <cmath>
#include <random>

namespace garchmom {

struct MixtureOptions {
  /// Accept eta6 == (15/9) eta4^2, which collapses the narrow component to a
  /// point mass at zero.
  bool allow_boundary = false;
};

/// Two zero-mean gaussian components with weights a, b and variances
/// sigma1_sq (narrow) and sigma2_sq (wide), normalised to unit variance.
/// The conditional moments are E[z^2j] = (2j-1)!! (a s1^j + b s2^j).
class MixtureParams {
 public:
  /// Solves for the components from the innovation's fourth and sixth
  /// moments eta4 = E[z^4], eta6 = E[z^6]. Requires eta4 > 3 and
  /// eta6 > (15/9) eta4^2; throws InfeasibleError naming the violated
  /// condition, or BoundaryError when eta6 lies on the bound (relative
  /// margin 1e-9) unless options.allow_boundary is set.
  static MixtureParams from_eta(double eta4, double eta6,
                                MixtureOptions options = {});

  /// Direct construction. Needs a in [0, 1], non-negative variances and
  /// a*sigma1_sq + (1-a)*sigma2_sq == 1 within 1e-12. Degenerate weights are
  /// allowed here (a == 1 gives a plain normal).
  static MixtureParams from_components(double a, double sigma1_sq,
                                       double sigma2_sq);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double sigma1_sq() const noexcept { return sigma1_sq_; }
  double sigma2_sq() const noexcept { return sigma2_sq_; }
  double eta4() const noexcept { return eta4_; }
  double eta6() const noexcept { return eta6_; }

 private:
  MixtureParams(double a, double sigma1_sq, double sigma2_sq);

  double a_;
  double b_;
  double sigma1_sq_;
  double sigma2_sq_;
  double eta4_;
  double eta6_;
};

/// E[z^order] for even order 2j, j in [0, 6]; odd orders are zero.
double even_moment(const MixtureParams& params, int order);

/// Draws from a mixture, keeping its distribution objects between calls.
/// The engine is owned by the caller; one sampler per thread.
class MixtureSampler {
 public:
  explicit MixtureSampler(const MixtureParams& params)
      : narrow_(params.a()),
        sd1_(std::sqrt(params.sigma1_sq())),
        sd2_(std::sqrt(params.sigma2_sq())) {}

  template <class Engine>
  double operator()(Engine& rng) {
    const double sd = narrow_(rng) ? sd1_ : sd2_;
    return sd * unit_(rng);
  }

 private:
  std::bernoulli_distribution narrow_;
  std::normal_distribution<double> unit_{0.0, 1.0};
  double sd1_;
  double sd2_;
};

/// One draw: component 1 with probability a, else component 2.
template <class Engine>
double sample(const MixtureParams& params, Engine& rng) {
  return MixtureSampler(params)(rng);
}

/// Table 2 presets: red (5, 41.7), blue (7, 81.7), green (12, 240). The green
/// preset sits exactly on the eta6 bound.
struct EtaPreset {
  const char* name;
  double eta4;
  double eta6;
};

inline constexpr EtaPreset kEtaPresets[] = {
    {"red", 5.0, 41.7},
    {"blue", 7.0, 81.7},
    {"green", 12.0, 240.0},
};

}  // namespace garchmom
