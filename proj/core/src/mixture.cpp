#include "garchmom/mixture.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "garchmom/distribution.hpp"
#include "garchmom/error.hpp"

namespace garchmom {
namespace {

constexpr double kBoundaryMargin = 1e-9;
constexpr double kNormalisationTol = 1e-12;

std::string num(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

}  // namespace

MixtureParams::MixtureParams(double a, double sigma1_sq, double sigma2_sq)
    : a_(a), b_(1.0 - a), sigma1_sq_(sigma1_sq), sigma2_sq_(sigma2_sq) {
  eta4_ = 3.0 * (a_ * sigma1_sq_ * sigma1_sq_ + b_ * sigma2_sq_ * sigma2_sq_);
  eta6_ = 15.0 * (a_ * sigma1_sq_ * sigma1_sq_ * sigma1_sq_ +
                  b_ * sigma2_sq_ * sigma2_sq_ * sigma2_sq_);
}

MixtureParams MixtureParams::from_eta(double eta4, double eta6, MixtureOptions options) {
  if (!std::isfinite(eta4) || !std::isfinite(eta6)) {
    throw InfeasibleError("eta4 and eta6 must be finite");
  }
  if (!(eta4 > 3.0)) {
    throw InfeasibleError("condition eta4 > 3 violated: eta4 = " + num(eta4) + " <= 3");
  }
  const double bound = 15.0 / 9.0 * eta4 * eta4;
  if (eta6 < bound * (1.0 - 1e-12)) {
    throw InfeasibleError("condition eta6 > (15/9) eta4^2 violated: eta6 = " + num(eta6) +
                          " < " + num(bound));
  }
  if (eta6 < bound * (1.0 + kBoundaryMargin) && !options.allow_boundary) {
    throw BoundaryError("eta6 = " + num(eta6) + " lies on the bound (15/9) eta4^2 = " +
                        num(bound) + "; the narrow component degenerates to zero variance");
  }

  const double mu4 = eta4 / 3.0;
  const double mu6 = eta6 / 15.0;
  const double x = (mu6 - mu4) / (mu4 - 1.0);           // sigma1^2 + sigma2^2
  const double y = std::max((mu6 - mu4 * mu4) / (mu4 - 1.0), 0.0);  // sigma1^2 sigma2^2
  const double disc = x * x - 4.0 * y;
  if (disc < 0.0) {
    throw InfeasibleError("complex component variances: X^2 - 4Y = " + num(disc) + " < 0");
  }
  const double root = x + std::sqrt(disc);
  const double s2 = 0.5 * root;
  const double s1 = 2.0 * y / root;
  const double a = (s2 - 1.0) / (s2 - s1);

  MixtureParams p(a, s1, s2);
  // 1 - a cancels when the wide component is rare.
  p.b_ = (1.0 - s1) / (s2 - s1);
  p.eta4_ = eta4;
  p.eta6_ = eta6;
  const double norm = p.a_ * p.sigma1_sq_ + p.b_ * p.sigma2_sq_;
  if (std::abs(norm - 1.0) > kNormalisationTol || !(s1 < 1.0 && 1.0 < s2)) {
    throw NumericalError("mixture solution lost unit variance for eta4 = " + num(eta4) +
                         ", eta6 = " + num(eta6));
  }
  return p;
}

MixtureParams MixtureParams::from_components(double a, double sigma1_sq, double sigma2_sq) {
  if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("mixture weight must lie in [0, 1]");
  if (!(sigma1_sq >= 0.0) || !(sigma2_sq >= 0.0)) {
    throw std::invalid_argument("component variances must be non-negative");
  }
  MixtureParams p(a, sigma1_sq, sigma2_sq);
  if (std::abs(p.a_ * p.sigma1_sq_ + p.b_ * p.sigma2_sq_ - 1.0) > kNormalisationTol) {
    throw std::invalid_argument("mixture must have unit variance: a s1 + b s2 = 1");
  }
  return p;
}

double even_moment(const MixtureParams& params, int order) {
  if (order < 0 || order > 2 * ConditionalDistribution::kMaxHalfOrder) {
    throw std::out_of_range("mixture moment order out of range");
  }
  if (order % 2 != 0) return 0.0;
  const int j = order / 2;
  if (j <= 1) return 1.0;
  const double s1 = std::pow(params.sigma1_sq(), j);
  const double s2 = std::pow(params.sigma2_sq(), j);
  return static_cast<double>(double_factorial_odd(j)) * (params.a() * s1 + params.b() * s2);
}

}  // namespace garchmom
