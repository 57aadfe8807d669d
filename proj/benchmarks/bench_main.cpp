#include <benchmark/benchmark.h>

#include <garchmom/fitting.hpp>
#include <garchmom/garch.hpp>
#include <garchmom/mixture.hpp>
#include <garchmom/phase.hpp>
#include <garchmom/rolling.hpp>
#include <garchmom/simulate.hpp>

using namespace garchmom;

namespace {

const ConditionalDistribution& red() {
  static const auto d = ConditionalDistribution::mixture(MixtureParams::from_eta(5.0, 41.7));
  return d;
}

void BM_Gamma6Recurrence(benchmark::State& state) {
  double a = 0.05;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gamma6(a, 0.8, red()));
    a = a < 0.1 ? a + 1e-6 : 0.05;
  }
}
BENCHMARK(BM_Gamma6Recurrence);

void BM_FitTrajectory(benchmark::State& state) {
  const auto m = model_moments({2e-5, 0.08, 0.6}, red(), 3);
  const MomentSummary target{m.variance, m.gammas[0], m.gammas[1], {}, 0};
  FitOptions options;
  options.resolution = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fit_trajectory_intercept(target, red(), options));
}
BENCHMARK(BM_FitTrajectory)->Arg(128)->Arg(512)->Unit(benchmark::kMicrosecond);

void BM_FitMomentMatch(benchmark::State& state) {
  const auto m = model_moments({2e-5, 0.08, 0.6}, red(), 3);
  const MomentSummary target{m.variance, m.gammas[0], m.gammas[1], {}, 0};
  for (auto _ : state) benchmark::DoNotOptimize(fit_moment_match(target, red()));
}
BENCHMARK(BM_FitMomentMatch)->Unit(benchmark::kMicrosecond);

void BM_RegionBoundary(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(region_boundary(ConditionalDistribution::normal(), 64, 256, 1));
  }
}
BENCHMARK(BM_RegionBoundary)->Unit(benchmark::kMillisecond);

void BM_Simulate(benchmark::State& state) {
  SimConfig c;
  c.params = {1e-5, 0.1, 0.85};
  c.dist = red();
  c.n_steps = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(simulate_returns(c));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Simulate)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_RollingFit(benchmark::State& state) {
  SimConfig c;
  c.params = {1e-5, 0.1, 0.85};
  c.n_steps = 2000;
  const auto returns = simulate_garch(c);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rolling_fit(returns, {126, 5}, ConditionalDistribution::normal(),
                                         {}, static_cast<unsigned>(state.range(0))));
  }
}
BENCHMARK(BM_RollingFit)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace
BENCHMARK_MAIN();
