#include "garchmom/garch.hpp"

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "garchmom/error.hpp"

namespace garchmom {
namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

void check_half_order(int m) {
  if (m < 0 || m > ConditionalDistribution::kMaxHalfOrder) {
    throw std::out_of_range("moment half-order must lie in [0, 6]");
  }
}

}  // namespace

long long double_factorial_odd(int j) {
  if (j < 0 || j > ConditionalDistribution::kMaxHalfOrder) {
    throw std::out_of_range("double factorial index out of range");
  }
  long long r = 1;
  for (int i = 1; i <= j; ++i) r *= 2 * i - 1;
  return r;
}

ConditionalDistribution ConditionalDistribution::normal() {
  ConditionalDistribution d;
  for (int j = 0; j <= kMaxHalfOrder; ++j) {
    d.moments_[j] = static_cast<double>(double_factorial_odd(j));
  }
  return d;
}

ConditionalDistribution ConditionalDistribution::mixture(const MixtureParams& params) {
  ConditionalDistribution d;
  for (int j = 0; j <= kMaxHalfOrder; ++j) d.moments_[j] = even_moment(params, 2 * j);
  d.mixture_ = params;
  return d;
}

double ConditionalDistribution::moment(int j) const {
  check_half_order(j);
  return moments_[j];
}

std::string ConditionalDistribution::describe() const {
  if (is_normal()) return "normal";
  std::ostringstream os;
  os.precision(10);
  os << "mixture(eta4=" << mixture_->eta4() << ", eta6=" << mixture_->eta6() << ')';
  return os.str();
}

void GarchParams::validate() const {
  if (!(alpha0 > 0.0) || !std::isfinite(alpha0)) {
    throw std::invalid_argument("alpha0 must be positive");
  }
  if (!(alpha1 >= 0.0) || !std::isfinite(alpha1)) {
    throw std::invalid_argument("alpha1 must be non-negative");
  }
  if (!(beta1 >= 0.0) || !std::isfinite(beta1)) {
    throw std::invalid_argument("beta1 must be non-negative");
  }
}

double mu(double alpha1, double beta1, int m, const ConditionalDistribution& dist) {
  check_half_order(m);
  double sum = 0.0;
  for (int j = 0; j <= m; ++j) {
    sum += binomial(m, j) * dist.moment(j) * std::pow(alpha1, j) * std::pow(beta1, m - j);
  }
  return sum;
}

std::vector<double> unconditional_even_moments(const GarchParams& params,
                                               const ConditionalDistribution& dist, int m) {
  params.validate();
  check_half_order(m);
  std::vector<double> mus(m + 1);
  std::vector<double> sigma_moments(m + 1);  // E[sigma^{2n}]
  mus[0] = 1.0;
  sigma_moments[0] = 1.0;
  for (int k = 1; k <= m; ++k) {
    mus[k] = mu(params.alpha1, params.beta1, k, dist);
    if (!(mus[k] < 1.0)) {
      throw DivergentMomentError("moment of order " + std::to_string(2 * k) +
                                     " diverges: mu(alpha1, beta1, " + std::to_string(k) +
                                     ") >= 1",
                                 k);
    }
    double acc = 0.0;
    for (int n = 0; n < k; ++n) {
      acc += binomial(k, n) * std::pow(params.alpha0, k - n) * mus[n] * sigma_moments[n];
    }
    sigma_moments[k] = acc / (1.0 - mus[k]);
  }
  std::vector<double> out(m + 1);
  for (int n = 0; n <= m; ++n) out[n] = dist.moment(n) * sigma_moments[n];
  return out;
}

double unconditional_even_moment(const GarchParams& params,
                                 const ConditionalDistribution& dist, int m) {
  return unconditional_even_moments(params, dist, m)[m];
}

double standardized_moment(double alpha1, double beta1, int m,
                           const ConditionalDistribution& dist) {
  const auto e = unconditional_even_moments({1.0, alpha1, beta1}, dist, m);
  return e[m] / std::pow(e[1], m);
}

double gamma4(double alpha1, double beta1, const ConditionalDistribution& dist) {
  return standardized_moment(alpha1, beta1, 2, dist);
}

double gamma6(double alpha1, double beta1, const ConditionalDistribution& dist) {
  return standardized_moment(alpha1, beta1, 3, dist);
}

double unconditional_variance(const GarchParams& params) {
  params.validate();
  const double s = params.alpha1 + params.beta1;
  if (!(s < 1.0)) throw DivergentMomentError("variance diverges: alpha1 + beta1 >= 1", 1);
  return params.alpha0 / (1.0 - s);
}

namespace closed_form {

double gamma4(double alpha1, double beta1, const ConditionalDistribution& dist) {
  const double s = alpha1 + beta1;
  const double mu2 = dist.eta4() * alpha1 * alpha1 + 2.0 * alpha1 * beta1 + beta1 * beta1;
  return dist.eta4() * (1.0 - s * s) / (1.0 - mu2);
}

double gamma4_normal(double a, double b) {
  return 3.0 + 6.0 * a * a / (1.0 - 3.0 * a * a - 2.0 * a * b - b * b);
}

double gamma6(double a, double b, const ConditionalDistribution& dist) {
  const double s = a + b;
  const double e4 = dist.eta4();
  const double e6 = dist.eta6();
  const double mu2 = e4 * a * a + 2.0 * a * b + b * b;
  const double mu3 = e6 * a * a * a + 3.0 * e4 * a * a * b + 3.0 * a * b * b + b * b * b;
  const double q = 1.0 - s;
  const double bracket =
      1.0 + 3.0 * s / q + 3.0 * mu2 * (1.0 + 2.0 * s / q) / (1.0 - mu2);
  return e6 * q * q * q * bracket / (1.0 - mu3);
}

double gamma6_normal(double a, double b) {
  const double s = a + b;
  const double q = 1.0 - s;
  const double inner = 1.0 + 3.0 * s / q +
                       3.0 * (1.0 + 2.0 * s / q) * (b * b + 2.0 * a * b + 3.0 * a * a) /
                           (1.0 - 3.0 * a * a - 2.0 * a * b - b * b);
  return 15.0 * q * q * q * inner /
         (1.0 - 15.0 * a * a * a - 9.0 * a * a * b - 3.0 * a * b * b - b * b * b);
}

}  // namespace closed_form

double divergence_beta_bisect(double alpha1, int m, const ConditionalDistribution& dist) {
  if (!(alpha1 >= 0.0)) throw std::invalid_argument("alpha1 must be non-negative");
  if (m < 1) throw std::invalid_argument("divergence lines start at m = 1");
  auto f = [&](double beta) { return mu(alpha1, beta, m, dist) - 1.0; };
  if (f(0.0) >= 0.0) {
    throw InfeasibleError("no divergence line at alpha1 = " + std::to_string(alpha1) +
                          ": mu(alpha1, 0, " + std::to_string(m) + ") >= 1");
  }
  double hi = 1.0;
  while (f(hi) < 0.0) hi *= 2.0;
  const auto [lo_b, hi_b] =
      boost::math::tools::bisect(f, 0.0, hi, boost::math::tools::eps_tolerance<double>());
  return 0.5 * (lo_b + hi_b);
}

double divergence_beta(double alpha1, int m, const ConditionalDistribution& dist) {
  if (!(alpha1 >= 0.0)) throw std::invalid_argument("alpha1 must be non-negative");
  if (m < 1) throw std::invalid_argument("divergence lines start at m = 1");
  if (mu(alpha1, 0.0, m, dist) >= 1.0) {
    throw InfeasibleError("no divergence line at alpha1 = " + std::to_string(alpha1) +
                          ": mu(alpha1, 0, " + std::to_string(m) + ") >= 1");
  }
  const double a = alpha1;
  switch (m) {
    case 1:
      return 1.0 - a;
    case 2:
      // eta4 a^2 + 2ab + b^2 = 1; gaussian: sqrt(1 - 2a^2) - a.
      return std::sqrt(1.0 - (dist.eta4() - 1.0) * a * a) - a;
    case 3:
      if (dist.is_normal()) {
        // b = y - a turns the cubic into y^3 + 6a^2 y + 8a^3 - 1 = 0.
        const double a3 = a * a * a;
        const double c = std::cbrt(1.0 - 8.0 * a3 + std::sqrt(96.0 * a3 * a3 - 16.0 * a3 + 1.0));
        const double cbrt2 = std::cbrt(2.0);
        return c / cbrt2 - a - 2.0 * cbrt2 * a * a / c;
      }
      break;
    default:
      break;
  }
  return divergence_beta_bisect(alpha1, m, dist);
}

int moment_existence_order(double alpha1, double beta1, const ConditionalDistribution& dist,
                           int max_m) {
  check_half_order(max_m);
  int order = 0;
  for (int n = 1; n <= max_m; ++n) {
    if (!(mu(alpha1, beta1, n, dist) < 1.0)) break;
    order = n;
  }
  return order;
}

double sixth_line_gamma4_limit(double alpha1, double eta4) {
  const double a = alpha1;
  const double b = 1.0 - a - (eta4 + 1.0) * a * a;
  const double num = eta4 * (1.0 - a - b);
  const double den = 1.0 - eta4 * a * a - 2.0 * a * b - b * b;
  if (std::abs(den) <= 1e-14 * std::max(1.0, std::abs(num))) {
    throw NumericalError("pole of the truncated Gamma4 expression at alpha1 = " +
                         std::to_string(alpha1));
  }
  return num / den;
}

ModelMoments model_moments(const GarchParams& params, const ConditionalDistribution& dist,
                           int max_m) {
  const auto e = unconditional_even_moments(params, dist, max_m);
  ModelMoments out{params, dist, e[1], {}};
  for (int m = 2; m <= max_m; ++m) out.gammas.push_back(e[m] / std::pow(e[1], m));
  return out;
}

}  // namespace garchmom
