#include "garchmom/simulate.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "garchmom/error.hpp"

namespace garchmom {

void SimConfig::validate() const {
  params.validate();
  if (n_steps < 1) throw std::invalid_argument("n_steps must be at least 1");
  if (!(variance_cap > 1.0)) throw std::invalid_argument("variance_cap must exceed 1");
}

namespace {

template <class Draw>
std::vector<double> run(const SimConfig& config, Draw draw, std::mt19937_64& rng) {
  const auto& p = config.params;
  const double persistence = p.alpha1 + p.beta1;
  double var = persistence < 1.0 ? p.alpha0 / (1.0 - persistence) : p.alpha0;
  const double cap = config.variance_cap * var;

  std::vector<double> out;
  out.reserve(config.n_steps);
  const std::size_t total = config.burn_in + config.n_steps;
  for (std::size_t t = 0; t < total; ++t) {
    const double x = draw(rng) * std::sqrt(var);
    if (t >= config.burn_in) out.push_back(x);
    var = p.alpha0 + p.alpha1 * x * x + p.beta1 * var;
    if (!(var <= cap)) {
      std::ostringstream os;
      os << "conditional variance " << var << " exceeded the cap " << cap << " at step " << t
         << " (alpha1 = " << p.alpha1 << ", beta1 = " << p.beta1
         << "); the process is not variance-stationary";
      throw SimulationOverflowError(os.str(), static_cast<long long>(t), var);
    }
  }
  return out;
}

}  // namespace

std::vector<double> simulate_returns(const SimConfig& config) {
  config.validate();
  std::mt19937_64 rng(config.seed);
  if (const auto& mix = config.dist.mixture_params()) {
    return run(config, MixtureSampler(*mix), rng);
  }
  std::normal_distribution<double> unit(0.0, 1.0);
  return run(config, [&unit](std::mt19937_64& g) { return unit(g); }, rng);
}

ReturnSeries simulate_garch(const SimConfig& config) {
  auto values = simulate_returns(config);
  auto dates = business_days(config.start_date, values.size());
  return ReturnSeries(std::move(dates), std::move(values));
}

double MomentEstimate::standard_error(int two_m) const {
  if (two_m == 2) return se_variance;
  if (two_m == 4) return se_gamma4;
  if (two_m == 6) return se_gamma6;
  const int idx = (two_m - 8) / 2;
  if (two_m % 2 != 0 || idx < 0 || idx >= static_cast<int>(se_higher.size())) {
    throw std::out_of_range("no standard error for order " + std::to_string(two_m));
  }
  return se_higher[idx];
}

double MomentEstimate::relative_se(int two_m) const {
  const double value = two_m == 2 ? summary.variance : summary.gamma(two_m);
  return standard_error(two_m) / std::abs(value);
}

bool MomentEstimate::reliable(int two_m) const {
  return relative_se(two_m) <= kMaxReliableRelativeSe;
}

MomentEstimate batch_means_estimate(std::span<const double> values, int max_order,
                                    int batches) {
  if (batches < 2) throw std::invalid_argument("need at least two batches");
  if (values.size() < static_cast<std::size_t>(batches) * 2) {
    throw std::invalid_argument("too few observations for the batch count");
  }
  MomentEstimate est;
  est.summary = standardized_moments(values, max_order);
  est.batches = batches;

  const int top = std::max(max_order, 6) / 2;
  const std::size_t n = values.size();
  // means[k][j] = batch k average of x^{2j}
  std::vector<std::vector<double>> means(batches, std::vector<double>(top + 1, 0.0));
  std::vector<double> overall(top + 1, 0.0);
  for (int k = 0; k < batches; ++k) {
    const std::size_t lo = n * k / batches;
    const std::size_t hi = n * (k + 1) / batches;
    for (std::size_t i = lo; i < hi; ++i) {
      const double x2 = values[i] * values[i];
      double p = x2;
      for (int j = 1; j <= top; ++j) {
        means[k][j] += p;
        p *= x2;
      }
    }
    for (int j = 1; j <= top; ++j) {
      overall[j] += means[k][j];
      means[k][j] /= static_cast<double>(hi - lo);
    }
  }
  for (int j = 1; j <= top; ++j) overall[j] /= static_cast<double>(n);

  const double kk = static_cast<double>(batches) * (batches - 1);
  double var_acc = 0.0;
  for (int k = 0; k < batches; ++k) {
    const double d = means[k][1] - overall[1];
    var_acc += d * d;
  }
  est.se_variance = std::sqrt(var_acc / kk);

  // Delta method for A_m / A_1^m.
  auto se_gamma = [&](int m) {
    const double a1 = overall[1];
    const double am = overall[m];
    const double scale = std::pow(a1, m);
    double acc = 0.0;
    for (int k = 0; k < batches; ++k) {
      const double d = (means[k][m] - am) / scale - m * am * (means[k][1] - a1) / (scale * a1);
      acc += d * d;
    }
    return std::sqrt(acc / kk);
  };
  est.se_gamma4 = se_gamma(2);
  est.se_gamma6 = se_gamma(3);
  for (int m = 4; m <= max_order / 2; ++m) est.se_higher.push_back(se_gamma(m));
  return est;
}

MomentEstimate mc_moment_estimate(const SimConfig& config, int max_order) {
  if (config.n_steps < 10'000) {
    throw std::invalid_argument("Monte Carlo estimates need n_steps >= 10^4");
  }
  const auto values = simulate_returns(config);
  return batch_means_estimate(values, max_order);
}

}  // namespace garchmom
