#include <benchmark/benchmark.h>

#include "hintloop/record_store.hpp"
#include "hintloop/rng.hpp"

using namespace hintloop;

namespace {

RecordStore& populated_store(std::size_t records) {
  static std::map<std::size_t, std::unique_ptr<RecordStore>> cache;
  auto it = cache.find(records);
  if (it == cache.end()) {
    auto store = std::make_unique<RecordStore>();
    Rng rng(77);
    Hint plan = get_hint(parse_hint("Leading (a b)"));
    for (std::size_t i = 0; i < records; ++i) {
      std::string sql = "SELECT c" + std::to_string(rng.next() % 64) + " FROM t" +
                        std::to_string(rng.next() % 32) + " WHERE k = " +
                        std::to_string(rng.next() % 10000);
      store->record_outcome("q" + std::to_string(i), sql, 0, plan,
                            rng.uniform(1, 500));
    }
    it = cache.emplace(records, std::move(store)).first;
  }
  return *it->second;
}

}  // namespace

static void BM_Embed(benchmark::State& state) {
  const std::string sql =
      "SELECT MIN(t.title) FROM title t, movie_keyword mk, keyword k "
      "WHERE t.id = mk.movie_id AND mk.keyword_id = k.id AND k.keyword = 'x'";
  for (auto _ : state) {
    benchmark::DoNotOptimize(hash_embedding(sql));
  }
}
BENCHMARK(BM_Embed);

static void BM_RetrieveTopK(benchmark::State& state) {
  RecordStore& store = populated_store(static_cast<std::size_t>(state.range(0)));
  SimilarityMetric metric = static_cast<SimilarityMetric>(state.range(1));
  const std::string probe = "SELECT c1 FROM t3 WHERE k = 42";
  for (auto _ : state) {
    auto refs = store.retrieve_references(probe, "q0", 5, metric);
    benchmark::DoNotOptimize(refs);
  }
}
BENCHMARK(BM_RetrieveTopK)
    ->Args({1000, 0})
    ->Args({1000, 1})
    ->Args({1000, 2})
    ->Args({10000, 0});

static void BM_RecordOutcome(benchmark::State& state) {
  RecordStore store;
  Hint plan = get_hint(parse_hint("Leading (a b)"));
  Rng rng(7);
  std::size_t i = 0;
  for (auto _ : state) {
    store.record_outcome("q" + std::to_string(i % 100),
                         "SELECT x FROM t WHERE k = " + std::to_string(i), 1,
                         plan, rng.uniform(1, 100));
    ++i;
  }
}
BENCHMARK(BM_RecordOutcome);
