#include <benchmark/benchmark.h>

#include "hintloop/generator.hpp"
#include "hintloop/hint.hpp"

using namespace hintloop;

static void BM_ParseJoinOrderHint(benchmark::State& state) {
  const std::string text = "Leading (((k mk) cc) (t (ci n)))";
  const std::vector<std::string> aliases = {"k", "mk", "cc", "t", "ci", "n"};
  for (auto _ : state) {
    auto result = parse_hint(text, aliases);
    benchmark::DoNotOptimize(result);
  }
}
BENCHMARK(BM_ParseJoinOrderHint);

static void BM_ParseFullPlanHint(benchmark::State& state) {
  const std::string text =
      "SeqScan(k) IndexScan(mk) IndexScan(cc) IndexScan(t) NestedLoop(k mk) "
      "NestedLoop(k mk cc) NestedLoop(k mk cc t) Leading (((k mk) cc) t)";
  const std::vector<std::string> aliases = {"k", "mk", "cc", "t"};
  for (auto _ : state) {
    auto result = parse_hint(text, aliases);
    benchmark::DoNotOptimize(result);
  }
}
BENCHMARK(BM_ParseFullPlanHint);

static void BM_SerializeHint(benchmark::State& state) {
  auto hint = get_hint(parse_hint(
      "SeqScan(k) IndexScan(mk) NestedLoop(k mk) Leading (k mk)"));
  for (auto _ : state) {
    benchmark::DoNotOptimize(serialize_hint(hint));
  }
}
BENCHMARK(BM_SerializeHint);

static void BM_NormalizeProseWrappedHint(benchmark::State& state) {
  const std::string text =
      "Sure, here is an improved plan for the query:\n"
      "Leading ((a b) (c d))\n"
      "This should reduce the join cost considerably.";
  const std::vector<std::string> aliases = {"a", "b", "c", "d"};
  for (auto _ : state) {
    auto result = normalize_generated_text(text, aliases, 4096);
    benchmark::DoNotOptimize(result);
  }
}
BENCHMARK(BM_NormalizeProseWrappedHint);

static void BM_EnumerateHintSpace(benchmark::State& state) {
  std::vector<std::string> aliases;
  for (int i = 0; i < state.range(0); ++i) {
    aliases.push_back("t" + std::to_string(i));
  }
  for (auto _ : state) {
    auto space = enumerate_hints(aliases, HintMode::JoinOrder);
    benchmark::DoNotOptimize(space);
  }
}
BENCHMARK(BM_EnumerateHintSpace)->Arg(3)->Arg(4)->Arg(5);

static void BM_MutationNeighbors(benchmark::State& state) {
  auto hint = get_hint(parse_hint("Leading (((k mk) cc) (t (ci n)))"));
  for (auto _ : state) {
    auto neighbors = mutation_neighbors(hint);
    benchmark::DoNotOptimize(neighbors);
  }
}
BENCHMARK(BM_MutationNeighbors);
