#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "hintloop/errors.hpp"
#include "hintloop/metrics.hpp"
#include "hintloop/orchestrator.hpp"
#include "hintloop/workload_gen.hpp"

using namespace hintloop;

namespace {

namespace fs = std::filesystem;

fs::path temp_dir() {
  fs::path dir = fs::temp_directory_path() / "hintloop_orch_test";
  fs::create_directories(dir);
  return dir;
}

fs::path write_workload(const std::string& name, const SimWorkload& wl) {
  fs::path path = temp_dir() / (name + ".json");
  save_workload(wl, path);
  return path;
}

RunConfig small_config(const fs::path& workload_file, int iterations = 12) {
  RunConfig config;
  config.workloads.push_back({"small", workload_file, std::nullopt});
  config.iterations = iterations;
  config.k = 1;
  config.seed = 7;
  MutatingGenerator mut;
  mut.seed = 17;
  config.generator.kind = mut;
  return config;
}

SimWorkload small_workload(std::uint64_t seed = 41) {
  WorkloadGenConfig gen;
  gen.name = "small";
  gen.query_count = 3;
  gen.min_aliases = 3;
  gen.max_aliases = 4;
  gen.seed = seed;
  return synth_workload(gen);
}

}  // namespace

TEST_CASE("episode schedules partition the iterations exactly") {
  std::vector<std::string> names{"wl_a", "wl_b", "wl_c"};
  auto spans = schedule_episodes(names, 10, 50, 3);
  REQUIRE(spans.size() == 10);
  int covered = 0, expected_start = 1;
  for (const auto& span : spans) {
    CHECK(span.first_iteration == expected_start);
    CHECK(span.last_iteration >= span.first_iteration);
    covered += span.last_iteration - span.first_iteration + 1;
    expected_start = span.last_iteration + 1;
    CHECK(std::find(names.begin(), names.end(), span.workload) != names.end());
  }
  CHECK(covered == 50);

  auto again = schedule_episodes(names, 10, 50, 3);
  for (std::size_t i = 0; i < spans.size(); ++i) {
    CHECK(spans[i].workload == again[i].workload);
    CHECK(spans[i].first_iteration == again[i].first_iteration);
    CHECK(spans[i].last_iteration == again[i].last_iteration);
  }

  auto one = schedule_episodes(names, 1, 50, 3);
  REQUIRE(one.size() == 1);
  CHECK(one[0].first_iteration == 1);
  CHECK(one[0].last_iteration == 50);

  CHECK_THROWS_AS(schedule_episodes(names, 51, 50, 3), Error);
  CHECK_THROWS_AS(schedule_episodes({}, 1, 50, 3), Error);
}

TEST_CASE("preparation loads iteration-0 records and is idempotent") {
  SimWorkload wl = small_workload();
  SimEngine engine(wl);
  RecordStore store;
  std::vector<std::pair<std::string, std::string>> queries;
  for (const auto& q : wl.queries) queries.emplace_back(q.sql_id, q.sql);

  auto report = prepare(store, engine, queries, HintMode::JoinOrder, 10000);
  CHECK(report.loaded == 3);
  CHECK(report.failures.empty());
  for (const auto& q : wl.queries) {
    CHECK(store.get_baseline(q.sql_id).iteration == 0);
  }

  auto empty = prepare(store, engine, {}, HintMode::JoinOrder, 10000);
  CHECK(empty.loaded == 0);

  std::map<std::string, double> bests_before;
  for (const auto& q : wl.queries) {
    bests_before[q.sql_id] = store.best_record(q.sql_id)->execution_time_ms;
  }
  prepare(store, engine, queries, HintMode::JoinOrder, 10000);
  for (const auto& q : wl.queries) {
    CHECK(store.best_record(q.sql_id)->execution_time_ms == bests_before[q.sql_id]);
    CHECK(store.get_baseline(q.sql_id).iteration == 0);
  }
}

TEST_CASE("a scripted oracle hint reaches the oracle gain from iteration 1") {
  SimWorkload wl = small_workload();
  SimEngine probe(wl);
  const auto& q = wl.queries[0];
  auto [oracle_hint, oracle_ms] = probe.oracle_optimum(q.sql_id, HintMode::JoinOrder);
  double oracle_gain =
      (probe.default_latency(q.sql_id) - oracle_ms) / probe.default_latency(q.sql_id);

  SimWorkload solo = wl;
  solo.queries = {q};
  fs::path file = write_workload("solo", solo);

  RunConfig config = small_config(file, 6);
  config.prepare = true;  // baseline preloaded: generation starts at iteration 1
  config.generator.kind = ScriptedGenerator{{serialize_hint(oracle_hint)}};

  Orchestrator orchestrator(config, std::nullopt);
  auto logs = orchestrator.run();
  REQUIRE(logs.size() == 6);
  for (const auto& log : logs) {
    REQUIRE(log.rows.size() == 1);
    CHECK(log.rows[0].stage == "gen");
    CHECK(log.rows[0].eta == doctest::Approx(oracle_gain));
  }
  CHECK(logs.front().rows[0].replaced);
}

TEST_CASE("a generator stuck on malformed output falls back to the default plan") {
  fs::path file = write_workload("small", small_workload());
  RunConfig config = small_config(file, 8);
  config.generator.kind = ScriptedGenerator{{"Leading (("}};

  Orchestrator orchestrator(config, std::nullopt);
  auto logs = orchestrator.run();
  for (const auto& log : logs) {
    if (log.iteration == 1) continue;  // initialization
    CHECK(log.ret == doctest::Approx(1.0));
    CHECK(log.hr == doctest::Approx(1.0));
    for (const auto& row : log.rows) {
      REQUIRE(row.error.has_value());
      CHECK(*row.error == "BracketMismatch");
    }
  }
}

TEST_CASE("best latency is monotone and initialization happens exactly once") {
  fs::path file = write_workload("small", small_workload());
  RunConfig config = small_config(file, 20);
  Orchestrator orchestrator(config, std::nullopt);
  auto logs = orchestrator.run();

  std::map<std::string, double> best;
  std::map<std::string, double> eta;
  std::map<std::string, int> inits;
  for (const auto& log : logs) {
    for (const auto& row : log.rows) {
      if (row.stage == "init") inits[row.sql_id]++;
      if (best.count(row.sql_id)) {
        CHECK(row.best_latency_ms <= best[row.sql_id]);
        CHECK(row.eta >= eta[row.sql_id]);
      }
      best[row.sql_id] = row.best_latency_ms;
      eta[row.sql_id] = row.eta;
    }
  }
  for (const auto& [sql_id, count] : inits) CHECK(count == 1);
  CHECK(inits.size() == 3);
}

TEST_CASE("dynamic runs follow a reproducible episode schedule") {
  fs::path fa = write_workload("wl_a", small_workload(51));
  fs::path fb = write_workload("wl_b", small_workload(52));
  fs::path fc = write_workload("wl_c", small_workload(53));

  RunConfig config;
  config.workloads = {{"wl_a", fa, std::nullopt},
                      {"wl_b", fb, std::nullopt},
                      {"wl_c", fc, std::nullopt}};
  config.iterations = 30;
  config.episodes = EpisodeConfig{10, std::nullopt};
  config.seed = 7;
  MutatingGenerator mut;
  mut.seed = 5;
  config.generator.kind = mut;

  Orchestrator a(config, std::nullopt);
  auto logs_a = a.run();
  Orchestrator b(config, std::nullopt);
  auto logs_b = b.run();
  REQUIRE(logs_a.size() == 30);
  std::set<std::string> seen;
  for (std::size_t i = 0; i < logs_a.size(); ++i) {
    CHECK(logs_a[i].workload == logs_b[i].workload);
    seen.insert(logs_a[i].workload);
    CHECK(logs_a[i].workload.find('+') == std::string::npos);  // one per episode
  }
  CHECK(seen.size() >= 2);
}

TEST_CASE("run configs parse from TOML with relative paths") {
  fs::path dir = temp_dir();
  save_workload(small_workload(), dir / "cfg_wl.json");
  std::ofstream(dir / "cfg.toml") << R"TOML(
seed = 9
iterations = 4
k = 2
metric = "l2"
mode = "join_order"

[generator]
kind = "scripted"
outputs = ["Leading (a b)"]

[[workload]]
name = "cfg"
file = "cfg_wl.json"
timeout_ms = 5000
)TOML";
  RunConfig config = run_config_from_toml(dir / "cfg.toml");
  CHECK(config.seed == 9);
  CHECK(config.iterations == 4);
  CHECK(config.k == 2);
  CHECK(config.metric == SimilarityMetric::L2);
  REQUIRE(config.workloads.size() == 1);
  CHECK(config.workloads[0].timeout_ms == doctest::Approx(5000));
  CHECK(fs::exists(config.workloads[0].file));
  CHECK(std::holds_alternative<ScriptedGenerator>(config.generator.kind));

  std::ofstream(dir / "noseed.toml") << "iterations = 4\n";
  CHECK_THROWS_AS(run_config_from_toml(dir / "noseed.toml"), Error);
}

TEST_CASE("prompt previews replay the run deterministically") {
  fs::path file = write_workload("small", small_workload());
  RunConfig config = small_config(file, 10);
  Orchestrator a(config, std::nullopt);
  Orchestrator b(config, std::nullopt);
  const std::string sql_id = "small_q01";
  std::string pa = a.preview_prompt(sql_id, 4);
  std::string pb = b.preview_prompt(sql_id, 4);
  CHECK(pa == pb);
  CHECK(pa.find("## Regulations") != std::string::npos);
  CHECK(pa.find("Query: " + sql_id) != std::string::npos);
}

TEST_CASE("iteration logs survive the JSONL round trip") {
  fs::path file = write_workload("small", small_workload());
  RunConfig config = small_config(file, 5);
  Orchestrator orchestrator(config, std::nullopt);
  auto logs = orchestrator.run();

  fs::path log_path = temp_dir() / "roundtrip.jsonl";
  write_run_log_jsonl(logs, log_path);
  auto loaded = read_run_log_jsonl(log_path);
  REQUIRE(loaded.size() == logs.size());
  for (std::size_t i = 0; i < logs.size(); ++i) {
    CHECK(loaded[i].iteration == logs[i].iteration);
    CHECK(loaded[i].ret == logs[i].ret);
    CHECK(loaded[i].hr == logs[i].hr);
    REQUIRE(loaded[i].rows.size() == logs[i].rows.size());
    for (std::size_t r = 0; r < logs[i].rows.size(); ++r) {
      CHECK(loaded[i].rows[r].sql_id == logs[i].rows[r].sql_id);
      CHECK(loaded[i].rows[r].latency_ms == logs[i].rows[r].latency_ms);
      CHECK(loaded[i].rows[r].hint_text == logs[i].rows[r].hint_text);
    }
  }
}
