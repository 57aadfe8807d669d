#pragma once

#include <vector>

#include "garchmom/distribution.hpp"

namespace garchmom {

/// sigma_t^2 = alpha0 + alpha1 x_{t-1}^2 + beta1 sigma_{t-1}^2, x_t = z_t sigma_t.
struct GarchParams {
  double alpha0 = 0.0;
  double alpha1 = 0.0;
  double beta1 = 0.0;

  /// Throws std::invalid_argument unless alpha0 > 0, alpha1 >= 0, beta1 >= 0.
  void validate() const;
};

/// mu(alpha1, beta1, m) = E[(alpha1 z^2 + beta1)^m]
///                      = sum_j C(m, j) m_{2j} alpha1^j beta1^(m-j).
double mu(double alpha1, double beta1, int m, const ConditionalDistribution& dist);

/// E[x^{2n}] for n = 0..m via the moment recurrence
///   E[s^{2m}] (1 - mu_m) = sum_{n<m} C(m, n) alpha0^{m-n} mu_n E[s^{2n}],
///   E[x^{2m}] = m_{2m} E[s^{2m}].
/// Throws DivergentMomentError at the smallest n <= m with mu_n >= 1.
std::vector<double> unconditional_even_moments(const GarchParams& params,
                                               const ConditionalDistribution& dist,
                                               int m);

double unconditional_even_moment(const GarchParams& params,
                                 const ConditionalDistribution& dist, int m);

/// Gamma_{2m} = E[x^{2m}] / E[x^2]^m from the recurrence (alpha0 drops out).
double standardized_moment(double alpha1, double beta1, int m,
                           const ConditionalDistribution& dist);

double gamma4(double alpha1, double beta1, const ConditionalDistribution& dist);
double gamma6(double alpha1, double beta1, const ConditionalDistribution& dist);

/// alpha0 / (1 - alpha1 - beta1).
double unconditional_variance(const GarchParams& params);

/// Closed forms, kept as cross-checks of the recurrence.
namespace closed_form {

/// eta4 (1 - s^2) / (1 - mu_2), s = alpha1 + beta1.
double gamma4(double alpha1, double beta1, const ConditionalDistribution& dist);

/// 3 + 6 a^2 / (1 - 3 a^2 - 2 a b - b^2).
double gamma4_normal(double alpha1, double beta1);

/// eta6 (1-s)^3 [1 + 3s/(1-s) + 3 mu_2 (1 + 2s/(1-s)) / (1 - mu_2)] / (1 - mu_3).
double gamma6(double alpha1, double beta1, const ConditionalDistribution& dist);

/// The gaussian sixth standardised moment with the (b^2 + 2ab + 3a^2) grouping.
double gamma6_normal(double alpha1, double beta1);

}  // namespace closed_form

/// beta1 on the line mu(alpha1, beta1, m) = 1. Analytic for m = 1, for m = 2
/// (any distribution) and for the gaussian m = 3 (Cardano); monotone
/// bisection otherwise. Throws InfeasibleError when mu(alpha1, 0, m) >= 1.
double divergence_beta(double alpha1, int m, const ConditionalDistribution& dist);

/// Same line found by bisection only; independent of the analytic forms.
double divergence_beta_bisect(double alpha1, int m,
                              const ConditionalDistribution& dist);

/// Largest m <= max_m with mu(alpha1, beta1, n) < 1 for all n <= m.
int moment_existence_order(double alpha1, double beta1,
                           const ConditionalDistribution& dist, int max_m = 6);

/// Gamma4 along beta1 = 1 - alpha1 - (eta4 + 1) alpha1^2, written as
///   eta4 (1 - a - b) / (1 - eta4 a^2 - 2 a b - b^2).
/// Throws NumericalError when the denominator vanishes.
double sixth_line_gamma4_limit(double alpha1, double eta4);

struct ModelMoments {
  GarchParams params;
  ConditionalDistribution dist;
  double variance;
  std::vector<double> gammas;  // Gamma_4, Gamma_6, ... up to 2 * max_m
};

/// Variance and standardised moments up to order 2 * max_m.
ModelMoments model_moments(const GarchParams& params,
                           const ConditionalDistribution& dist, int max_m = 3);

}  // namespace garchmom
