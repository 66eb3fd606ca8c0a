#include <random>

#include <benchmark/benchmark.h>

#include "posop/campaign.hpp"
#include "posop/gallery.hpp"
#include "posop/spectral.hpp"
#include "posop/structure.hpp"
#include "posop/verdicts.hpp"

namespace {

posop::Operator stochastic(std::size_t dim) {
  std::mt19937_64 rng(dim);
  return posop::Operator(posop::random_irreducible_stochastic(dim, rng),
                         posop::SpaceSemantics::sequence(dim));
}

void BM_Eigenvalues(benchmark::State& state) {
  const auto t = stochastic(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(posop::eigenvalues(t));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Eigenvalues)->RangeMultiplier(2)->Range(8, 256)->Complexity();

void BM_ExpansionEverywhere(benchmark::State& state) {
  const auto t = stochastic(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(posop::expands_support_everywhere(t, 2 * t.dim(), 16, 0));
  }
}
BENCHMARK(BM_ExpansionEverywhere)->RangeMultiplier(4)->Range(8, 512);

void BM_Period(benchmark::State& state) {
  const auto t = stochastic(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(posop::period(t));
}
BENCHMARK(BM_Period)->RangeMultiplier(4)->Range(8, 512);

void BM_PartitionConvergence(benchmark::State& state) {
  const auto t = posop::partition_operator(6, 5, posop::cyclic_pairing(6), 0.2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(posop::classify_power_convergence(posop::eigenvalues(t), t));
  }
}
BENCHMARK(BM_PartitionConvergence);

void BM_AnalyzeWeaklyExpanding(benchmark::State& state) {
  const auto s = posop::build_scenario("weakly_expanding");
  for (auto _ : state) benchmark::DoNotOptimize(posop::analyze(s.op));
}
BENCHMARK(BM_AnalyzeWeaklyExpanding)->Unit(benchmark::kMillisecond);

void BM_Campaign(benchmark::State& state) {
  posop::CampaignConfig c;
  c.count = 50;
  c.dim_min = 1;
  c.dim_max = 12;
  c.seed = 42;
  c.jobs = 1;
  for (auto _ : state) benchmark::DoNotOptimize(posop::run_campaign(c));
}
BENCHMARK(BM_Campaign)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
