#include <benchmark/benchmark.h>

#include "hintloop/reward.hpp"
#include "hintloop/rng.hpp"

using namespace hintloop;

static void BM_LatencyReward(benchmark::State& state) {
  Rng rng(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(latency_reward(rng.uniform(0.1, 10.0)));
  }
}
BENCHMARK(BM_LatencyReward);

static void BM_ScoreGroup(benchmark::State& state) {
  Rng rng(2);
  std::vector<double> latencies(static_cast<std::size_t>(state.range(0)));
  for (auto& t : latencies) t = rng.uniform(10, 1000);
  for (auto _ : state) {
    benchmark::DoNotOptimize(score_group(100.0, latencies));
  }
}
BENCHMARK(BM_ScoreGroup)->Arg(4)->Arg(16)->Arg(64);

static void BM_NormalizeAdvantages(benchmark::State& state) {
  Rng rng(3);
  std::vector<double> rewards(static_cast<std::size_t>(state.range(0)));
  for (auto& r : rewards) r = rng.uniform(-1, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(normalize_advantages(rewards));
  }
}
BENCHMARK(BM_NormalizeAdvantages)->Arg(8)->Arg(64);
