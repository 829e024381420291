#include "doctest.h"

#include "hintloop/engine.hpp"
#include "hintloop/errors.hpp"
#include "hintloop/prompt.hpp"
#include "hintloop/rng.hpp"

using namespace hintloop;

namespace {

Hint jo(const std::string& text) {
  auto r = parse_hint(text);
  REQUIRE(!is_error(r));
  return get_hint(r);
}

ExecutionRecord make_record(const std::string& sql_id, const std::string& sql,
                            const std::string& hint, double ms) {
  ExecutionRecord r;
  r.sql_id = sql_id;
  r.sql = sql;
  r.plan = jo(hint);
  r.plan_text = hint;
  r.execution_time_ms = ms;
  return r;
}

PlanStats demo_stats() {
  PlanStats stats;
  stats.table_cardinalities = {{"a", 1200}, {"b", 90}};
  stats.filter_selectivities = {{"a", 0.125}};
  return stats;
}

}  // namespace

TEST_CASE("first-iteration bundles carry references, stats and regulations") {
  auto refs = std::vector<ExecutionRecord>{
      make_record("other_q", "SELECT x FROM o", "Leading (c d)", 42.5)};
  PromptBundle bundle =
      build_prompt("demo_q1", "SELECT * FROM a, b", 1, refs, demo_stats(), {});

  CHECK(bundle.references.size() == 1);
  CHECK(!bundle.best.has_value());
  const std::string& up = bundle.user_rendered;
  CHECK(up.find("## References") != std::string::npos);
  CHECK(up.find("## Statistics") != std::string::npos);
  CHECK(up.find("## Regulations") != std::string::npos);
  CHECK(up.find("## Best so far") == std::string::npos);
  CHECK(up.find("latency_ms: 42.500") != std::string::npos);
  CHECK(up.find("cardinality a: 1200") != std::string::npos);
  CHECK(up.find("selectivity a: 0.1250") != std::string::npos);
  CHECK(bundle.rendered.find(kSystemPrompt) == 0);
}

TEST_CASE("section order is references, statistics, best, regulations") {
  auto refs = std::vector<ExecutionRecord>{
      make_record("other_q", "SELECT x FROM o", "Leading (c d)", 10)};
  PromptBundle bundle = build_prompt(
      "demo_q1", "SELECT * FROM a, b", 3, refs, demo_stats(),
      PromptBestSoFar{jo("Leading (a b)"), "Leading (a b)", 0.4});
  const std::string& up = bundle.user_rendered;
  auto p_refs = up.find("## References");
  auto p_stats = up.find("## Statistics");
  auto p_best = up.find("## Best so far");
  auto p_regs = up.find("## Regulations");
  REQUIRE(p_refs != std::string::npos);
  REQUIRE(p_best != std::string::npos);
  CHECK(p_refs < p_stats);
  CHECK(p_stats < p_best);
  CHECK(p_best < p_regs);
  CHECK(up.find("gain: 40.00%") != std::string::npos);
}

TEST_CASE("negative gains are tagged as worse than baseline") {
  CHECK(format_gain_percent(-0.25) == "-25.00% (worse than baseline)");
  CHECK(format_gain_percent(0.4) == "40.00%");
}

TEST_CASE("empty reference lists omit the section") {
  PromptBundle bundle =
      build_prompt("demo_q1", "SELECT 1", 1, {}, demo_stats(), {});
  CHECK(bundle.user_rendered.find("## References") == std::string::npos);
}

TEST_CASE("self references are rejected") {
  auto refs = std::vector<ExecutionRecord>{
      make_record("demo_q1", "SELECT 1", "Leading (a b)", 5)};
  CHECK_THROWS_AS(build_prompt("demo_q1", "SELECT 1", 1, refs, demo_stats(), {}),
                  Error);
}

TEST_CASE("compute_gain arithmetic") {
  CHECK(compute_gain(100, 60) == doctest::Approx(0.4));
  CHECK(compute_gain(100, 100) == doctest::Approx(0.0));
  CHECK(compute_gain(100, 150) == doctest::Approx(-0.5));
  CHECK_THROWS_AS(compute_gain(0, 10), Error);
}

TEST_CASE("rendering is a pure function of the sections") {
  auto refs = std::vector<ExecutionRecord>{
      make_record("o", "SELECT x FROM o", "Leading (c d)", 10)};
  PromptBundle a = build_prompt("q", "SELECT 1", 2, refs, demo_stats(),
                                PromptBestSoFar{jo("Leading (a b)"), "Leading (a b)", 0.1});
  PromptBundle b = build_prompt("q", "SELECT 1", 2, refs, demo_stats(),
                                PromptBestSoFar{jo("Leading (a b)"), "Leading (a b)", 0.1});
  CHECK(a.rendered == b.rendered);
}

TEST_CASE("evolve_prompt applies the feedback loop end to end") {
  RecordStore store;
  store.record_outcome("q1", "SELECT a FROM ta, tb", 0, jo("Leading (a b)"), 100);
  store.record_outcome("q2", "SELECT b FROM tc, td", 0, jo("Leading (c d)"), 50);

  PlanStats stats = demo_stats();

  // A better execution updates the best record and the rendered gain.
  PromptBundle improved = evolve_prompt(jo("Leading (b a)"), 60, 1, store, "q1",
                                        "SELECT a FROM ta, tb", 2, 1,
                                        SimilarityMetric::Cosine, stats);
  REQUIRE(improved.best.has_value());
  CHECK(improved.best->hint_text == "Leading (b a)");
  CHECK(improved.best->gain == doctest::Approx(0.4));
  CHECK(improved.references.size() == 1);
  CHECK(improved.references[0].sql_id == "q2");

  // A worse execution leaves the best record alone.
  PromptBundle worse = evolve_prompt(jo("Leading (a b)"), 90, 2, store, "q1",
                                     "SELECT a FROM ta, tb", 3, 1,
                                     SimilarityMetric::Cosine, stats);
  REQUIRE(worse.best.has_value());
  CHECK(worse.best->hint_text == "Leading (b a)");
  CHECK(worse.best->gain == doctest::Approx(0.4));
}

TEST_CASE("eta is non-decreasing across an improvement loop") {
  RecordStore store;
  store.record_outcome("q1", "SELECT a FROM ta, tb", 0, jo("Leading (a b)"), 100);
  store.record_outcome("q2", "SELECT b FROM tc, td", 0, jo("Leading (c d)"), 50);
  Rng rng(14);
  double prev_eta = -1;
  for (int i = 1; i <= 10; ++i) {
    double latency = rng.uniform(20, 150);
    PromptBundle bundle = evolve_prompt(jo("Leading (b a)"), latency, i, store,
                                        "q1", "SELECT a FROM ta, tb", i + 1, 1,
                                        SimilarityMetric::Cosine, demo_stats());
    REQUIRE(bundle.best.has_value());
    CHECK(bundle.best->gain >= prev_eta);
    prev_eta = bundle.best->gain;
  }
}

TEST_CASE("evolve_prompt requires an initialization record") {
  RecordStore store;
  CHECK_THROWS_AS(evolve_prompt(jo("Leading (a b)"), 10, 1, store, "q_missing",
                                "SELECT 1", 2, 1, SimilarityMetric::Cosine,
                                demo_stats()),
                  Error);
}
