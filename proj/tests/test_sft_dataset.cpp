#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "hintloop/errors.hpp"
#include "hintloop/sft_dataset.hpp"
#include "hintloop/workload_gen.hpp"

using namespace hintloop;

namespace {

std::vector<std::pair<std::string, std::string>> workload_queries(
    const SimWorkload& wl) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& q : wl.queries) out.emplace_back(q.sql_id, q.sql);
  return out;
}

}  // namespace

TEST_CASE("five sim queries produce five parseable entries") {
  WorkloadGenConfig config;
  config.name = "ds";
  config.query_count = 5;
  config.min_aliases = 3;
  config.max_aliases = 4;
  config.seed = 31;
  SimEngine engine(synth_workload(config));

  auto report = build_sft_dataset(engine, workload_queries(engine.workload()),
                                  HintMode::FullPlan, 10000, "2026-01-01T00:00:00Z");
  CHECK(report.entries.size() == 5);
  CHECK(report.failures.empty());
  for (const auto& e : report.entries) {
    CHECK_FALSE(is_error(parse_hint(e.hint_text)));
    CHECK(e.prompt_text.find(engine.query(e.sql_id).sql) != std::string::npos);
    CHECK(e.prompt_text.find("Cardinalities:") != std::string::npos);
    CHECK(e.engine == engine.name());
  }
}

TEST_CASE("single-table plans yield a hint without a Leading clause") {
  SimWorkload wl;
  wl.name = "one";
  wl.mode = HintMode::FullPlan;
  wl.timeout_ms = 10000;
  SimQuery q;
  q.sql_id = "one_q1";
  q.sql = "SELECT COUNT(*) FROM title t WHERE t.production_year > 2000";
  q.aliases = {"t"};
  q.default_hint_text = "SeqScan(t)";
  auto parsed = parse_hint(q.default_hint_text, q.aliases);
  q.default_hint = get_hint(parsed);
  q.latency_by_hint["SeqScan(t)"] = 15;
  wl.queries.push_back(q);

  SimEngine engine(wl);
  auto report = build_sft_dataset(engine, workload_queries(wl), HintMode::FullPlan,
                                  10000, "stamp");
  REQUIRE(report.entries.size() == 1);
  CHECK(report.entries[0].hint_text == "SeqScan(t)");
  CHECK(report.entries[0].hint_text.find("Leading") == std::string::npos);
}

TEST_CASE("the job20a fixture entry matches its golden hint") {
  ReplayEngine replay;
  replay.add_fixture("job_20a", "SELECT MIN(t.title) FROM keyword k, movie_keyword mk, complete_cast cc, title t WHERE ...",
                     std::string(FIXTURES_DIR) + "/job20a.json");
  auto report = build_sft_dataset(replay, replay.queries(), HintMode::FullPlan,
                                  1e7, "stamp");
  REQUIRE(report.entries.size() == 1);

  std::ifstream golden(std::string(FIXTURES_DIR) + "/job20a.hint");
  std::string expected;
  std::getline(golden, expected);
  CHECK(report.entries[0].hint_text == expected);
}

TEST_CASE("timed-out queries are skipped and reported") {
  WorkloadGenConfig config;
  config.name = "slow";
  config.query_count = 2;
  config.min_aliases = 3;
  config.max_aliases = 3;
  config.seed = 32;
  SimWorkload wl = synth_workload(config);
  // Force the first query's default plan over the ceiling.
  auto& q0 = wl.queries[0];
  q0.latency_by_hint[q0.default_hint_text] = 50000;

  SimEngine engine(wl);
  auto report = build_sft_dataset(engine, workload_queries(wl), HintMode::FullPlan,
                                  10000, "stamp");
  CHECK(report.entries.size() == 1);
  REQUIRE(report.failures.size() == 1);
  CHECK(report.failures[0].first == q0.sql_id);
}

TEST_CASE("a fully failing workload raises EmptyDataset") {
  SimWorkload wl;
  wl.name = "empty";
  wl.timeout_ms = 10;
  SimQuery q;
  q.sql_id = "e_q1";
  q.sql = "SELECT 1";
  q.aliases = {"a", "b"};
  q.default_hint_text = "Leading (a b)";
  q.default_hint = get_hint(parse_hint(q.default_hint_text));
  q.latency_by_hint["Leading (a b)"] = 1e6;  // always over the ceiling
  wl.queries.push_back(q);
  SimEngine engine(wl);
  CHECK_THROWS_AS(
      build_sft_dataset(engine, workload_queries(wl), HintMode::FullPlan, 10, "s"),
      Error);
}

TEST_CASE("dataset files round trip") {
  namespace fs = std::filesystem;
  fs::path path = fs::temp_directory_path() / "hintloop_sft_test.jsonl";

  std::vector<SftDatasetEntry> entries;
  for (int i = 0; i < 100; ++i) {
    SftDatasetEntry e;
    e.sql_id = "q" + std::to_string(i);
    e.prompt_text = "prompt line\nwith breaks " + std::to_string(i);
    e.hint_text = (i % 2) ? "Leading (a b)" : "SeqScan(a)";
    e.engine = "sim:test";
    e.timestamp = "2026-01-01T00:00:00Z";
    entries.push_back(e);
  }
  write_dataset(entries, path);
  auto loaded = read_dataset(path);
  REQUIRE(loaded.size() == entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    CHECK(loaded[i].sql_id == entries[i].sql_id);
    CHECK(loaded[i].prompt_text == entries[i].prompt_text);
    CHECK(loaded[i].hint_text == entries[i].hint_text);
  }

  write_dataset({}, path);
  CHECK(read_dataset(path).empty());
  fs::remove(path);
}

TEST_CASE("schema violations name the line") {
  namespace fs = std::filesystem;
  fs::path path = fs::temp_directory_path() / "hintloop_sft_bad.jsonl";
  std::ofstream out(path);
  out << R"JSON({"sql_id":"q1","prompt":"p","hint":"Leading (a b)","engine":"e","timestamp":"t"})JSON" << "\n";
  out << R"({"sql_id":"q2","prompt":"p","engine":"e","timestamp":"t"})" << "\n";
  out.close();
  try {
    read_dataset(path);
    FAIL("expected SchemaViolation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SchemaViolation);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  fs::remove(path);
}

TEST_CASE("labels reproduce the default plan latency when resubmitted") {
  WorkloadGenConfig config;
  config.name = "label";
  config.query_count = 4;
  config.min_aliases = 3;
  config.max_aliases = 4;
  config.seed = 33;
  SimEngine engine(synth_workload(config));

  auto report = build_sft_dataset(engine, workload_queries(engine.workload()),
                                  HintMode::JoinOrder, 10000, "stamp");
  for (const auto& e : report.entries) {
    auto parsed = parse_hint(e.hint_text);
    REQUIRE(!is_error(parsed));
    EngineRequest req{e.sql_id, engine.query(e.sql_id).sql, get_hint(parsed), 10000};
    double resubmitted = engine.execute(req).latency_ms;
    double default_ms = engine.default_latency(e.sql_id);
    CHECK(resubmitted == doctest::Approx(default_ms));
  }
}
