#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "records/criteria.hpp"
#include "records/exactjoint.hpp"
#include "records/extremal.hpp"
#include "records/falpha.hpp"
#include "records/threshold_scheme.hpp"

using namespace records;

static void BM_FalphaTrajectory(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const FalphaSampler s(Distribution::pareto(2.0), AlphaSequence::polynomial(1.0), n, 1);
  Trajectory t;
  std::uint64_t rep = 0;
  for (auto _ : state) {
    s.sample_into(rep++, t);
    benchmark::DoNotOptimize(t.N.back());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_FalphaTrajectory)->Arg(100)->Arg(10000);

static void BM_CoupledTrajectory(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  ThresholdSchemeSpec spec{Distribution::exponential(), AlphaSequence::constant(),
                           ThresholdSequence::flat(-std::log(0.1))};
  spec.below = BelowKind::Vee;
  spec.vee.law = VeeLaw::Iid;
  const CoupledSampler s(spec, n, 1);
  CoupledTrajectory t;
  std::uint64_t rep = 0;
  for (auto _ : state) {
    s.sample_into(rep++, t);
    benchmark::DoNotOptimize(t.agreement_start);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_CoupledTrajectory)->Arg(1000);

static void BM_ExtremalPath(benchmark::State& state) {
  const auto grid = geometric_grid(1.0, 1e4, static_cast<std::size_t>(state.range(0)));
  const ExtremalSampler s(Distribution::exponential(), grid, 1);
  ExtremalPath p;
  std::uint64_t rep = 0;
  for (auto _ : state) {
    s.sample_into(rep++, p);
    benchmark::DoNotOptimize(p.levels.back());
  }
}
BENCHMARK(BM_ExtremalPath)->Arg(400);

static void BM_ExactCountPmf(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(exact_count_pmf(AlphaSequence::constant(), n));
}
BENCHMARK(BM_ExactCountPmf)->Arg(100)->Arg(1000)->Arg(10000);

static void BM_KSum(benchmark::State& state) {
  const auto F = Distribution::exponential();
  const auto levels = ThresholdSequence::log_scaled(0.5, 0.0);
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> q(n);
  for (std::size_t k = 1; k <= n; ++k) q[k - 1] = levels.tail(F, k);
  for (auto _ : state) benchmark::DoNotOptimize(K_sum(AlphaSequence::constant(), q).partial);
}
BENCHMARK(BM_KSum)->Arg(100000);

static void BM_JIntegralStep(benchmark::State& state) {
  const auto F = Distribution::exponential();
  const auto alpha = AlphaSequence::constant();
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto b = step_boundary(ThresholdSequence::log_scaled(0.5, 0.0), alpha, n + 1);
  const auto s = alpha.partial_sums(n + 1);
  for (auto _ : state) benchmark::DoNotOptimize(J_integral(F, b, s[n + 1], {s[1]}).partial);
}
BENCHMARK(BM_JIntegralStep)->Arg(2000);

static void BM_SupRatioDecay(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(sup_ratio_decay(AlphaSequence::constant(), 0.5, {5, 10, 20, 40}, 500));
}
BENCHMARK(BM_SupRatioDecay)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
