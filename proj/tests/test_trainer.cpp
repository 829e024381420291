#include "doctest.h"

#include <cmath>

#include "hintloop/errors.hpp"
#include "hintloop/trainer.hpp"
#include "hintloop/workload_gen.hpp"

using namespace hintloop;

namespace {

Hint jo(const std::string& text) {
  auto r = parse_hint(text);
  REQUIRE(!is_error(r));
  return get_hint(r);
}

// One query, two join orders, the non-default one 10x faster.
SimWorkload bandit_workload() {
  SimWorkload wl;
  wl.name = "bandit";
  wl.timeout_ms = 10000;
  wl.seed = 3;
  SimQuery q;
  q.sql_id = "bandit_q1";
  q.sql = "SELECT COUNT(*) FROM ta a, tb b WHERE a.id = b.a_id";
  q.aliases = {"a", "b"};
  q.default_hint_text = "Leading (a b)";
  q.default_hint = jo(q.default_hint_text);
  q.latency_by_hint["Leading (a b)"] = 100;
  q.latency_by_hint["Leading (b a)"] = 10;
  wl.queries.push_back(q);
  return wl;
}

SimWorkload flat_workload() {
  SimWorkload wl = bandit_workload();
  wl.name = "flat";
  wl.queries[0].latency_by_hint["Leading (b a)"] = 100;  // nothing to learn
  return wl;
}

}  // namespace

TEST_CASE("uniform policies start at log(space) NLL") {
  SimEngine engine(bandit_workload());
  TabularPolicy policy = make_uniform_policy(engine, HintMode::JoinOrder);
  const auto& ctx = policy.context("bandit_q1");
  REQUIRE(ctx.hints.size() == 2);

  std::vector<SftPair> batch{{"bandit_q1", "prompt", jo("Leading (b a)")}};
  double nll = sft_step(policy, batch, 0.0);
  CHECK(nll == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("sft converges onto a single reference pair") {
  WorkloadGenConfig config;
  config.name = "sftwl";
  config.query_count = 1;
  config.min_aliases = 3;
  config.max_aliases = 3;
  config.seed = 8;
  SimEngine engine(synth_workload(config));
  TabularPolicy policy = make_uniform_policy(engine, HintMode::JoinOrder);
  const std::string sql_id = engine.workload().queries[0].sql_id;
  const auto& ctx = policy.context(sql_id);
  REQUIRE(ctx.hints.size() == 12);
  CHECK(sft_step(policy, {{sql_id, "p", ctx.hints[5]}}, 0.0) ==
        doctest::Approx(std::log(12.0)).epsilon(1e-9));

  std::vector<SftPair> batch{{sql_id, "p", ctx.hints[5]}};
  for (int i = 0; i < 100; ++i) sft_step(policy, batch, 0.5);
  CHECK(policy.probabilities(sql_id)[5] > 0.9);
}

TEST_CASE("zero learning rate leaves the policy unchanged") {
  SimEngine engine(bandit_workload());
  TabularPolicy policy = make_uniform_policy(engine, HintMode::JoinOrder);
  auto before = policy.probabilities("bandit_q1");
  std::vector<SftPair> batch{{"bandit_q1", "p", jo("Leading (b a)")}};
  double first = sft_step(policy, batch, 0.0);
  double second = sft_step(policy, batch, 0.0);
  CHECK(first == second);
  CHECK(policy.probabilities("bandit_q1") == before);
}

TEST_CASE("sft strictly decreases NLL at a small learning rate") {
  SimEngine engine(bandit_workload());
  TabularPolicy policy = make_uniform_policy(engine, HintMode::JoinOrder);
  std::vector<SftPair> batch{{"bandit_q1", "p", jo("Leading (b a)")}};
  double prev = sft_step(policy, batch, 1e-3);
  for (int i = 0; i < 10; ++i) {
    double nll = sft_step(policy, batch, 1e-3);
    CHECK(nll < prev);
    prev = nll;
  }
}

TEST_CASE("references outside the space raise UnknownHint") {
  SimEngine engine(bandit_workload());
  TabularPolicy policy = make_uniform_policy(engine, HintMode::JoinOrder);
  std::vector<SftPair> batch{{"bandit_q1", "p", jo("Leading (x y)")}};
  CHECK_THROWS_AS(sft_step(policy, batch, 0.1), Error);
}

TEST_CASE("kl divergence basics") {
  CHECK(kl_divergence({0.5, 0.5}, {0.5, 0.5}) == doctest::Approx(0.0));
  CHECK(kl_divergence({1.0, 0.0}, {0.5, 0.5}) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-9));
  CHECK_THROWS_AS(kl_divergence({0.5, 0.5}, {1.0}), Error);

  Rng rng(6);
  for (int i = 0; i < 100; ++i) {
    std::vector<double> p(4), q(4);
    double sp = 0, sq = 0;
    for (int j = 0; j < 4; ++j) {
      p[j] = rng.uniform(0.01, 1);
      q[j] = rng.uniform(0.01, 1);
      sp += p[j];
      sq += q[j];
    }
    for (int j = 0; j < 4; ++j) {
      p[j] /= sp;
      q[j] /= sq;
    }
    CHECK(kl_divergence(p, q) >= -1e-12);
  }
}

TEST_CASE("qgrpo shifts probability onto the fast hint") {
  SimEngine engine(bandit_workload());
  TabularPolicy initial = make_uniform_policy(engine, HintMode::JoinOrder);
  std::size_t fast = initial.hint_index("bandit_q1", jo("Leading (b a)"));

  GrpoConfig config;
  config.seed = 4;
  config.steps = 200;
  config.group_size = 4;
  config.learning_rate = 0.1;
  auto result = qgrpo_train(initial, engine, HintMode::JoinOrder, config);

  CHECK(result.policy.probabilities("bandit_q1")[fast] > 0.5);
  CHECK(result.logs.back().mean_reward > result.logs.front().mean_reward);
  CHECK(result.logs.size() == 200);
}

TEST_CASE("large kl weight keeps the policy near the reference") {
  SimEngine engine(bandit_workload());
  TabularPolicy initial = make_uniform_policy(engine, HintMode::JoinOrder);
  GrpoConfig free;
  free.seed = 4;
  free.steps = 150;
  free.kl_weight = 0.0;
  GrpoConfig tethered = free;
  tethered.kl_weight = 1000.0;

  auto unconstrained = qgrpo_train(initial, engine, HintMode::JoinOrder, free);
  auto constrained = qgrpo_train(initial, engine, HintMode::JoinOrder, tethered);
  CHECK(constrained.logs.back().kl < unconstrained.logs.back().kl);
}

TEST_CASE("degenerate groups leave the policy unchanged") {
  SimEngine engine(bandit_workload());
  TabularPolicy initial = make_uniform_policy(engine, HintMode::JoinOrder);

  GrpoConfig g1;
  g1.seed = 4;
  g1.steps = 25;
  g1.group_size = 1;  // single-member groups standardize to zero
  auto r1 = qgrpo_train(initial, engine, HintMode::JoinOrder, g1);
  CHECK(r1.policy.context("bandit_q1").logits ==
        initial.context("bandit_q1").logits);

  SimEngine flat(flat_workload());
  TabularPolicy flat_init = make_uniform_policy(flat, HintMode::JoinOrder);
  GrpoConfig g4;
  g4.seed = 4;
  g4.steps = 25;
  g4.group_size = 4;  // equal rewards everywhere
  auto r4 = qgrpo_train(flat_init, flat, HintMode::JoinOrder, g4);
  CHECK(r4.policy.context("bandit_q1").logits ==
        flat_init.context("bandit_q1").logits);
  for (const auto& log : r4.logs) CHECK(log.kl == doctest::Approx(0.0));
}

TEST_CASE("with zero kl weight the good hint's probability never decreases") {
  SimEngine engine(bandit_workload());
  TabularPolicy policy = make_uniform_policy(engine, HintMode::JoinOrder);
  std::size_t fast = policy.hint_index("bandit_q1", jo("Leading (b a)"));

  GrpoConfig config;
  config.seed = 12;
  config.steps = 1;
  config.kl_weight = 0.0;
  double prev = policy.probabilities("bandit_q1")[fast];
  for (int step = 0; step < 60; ++step) {
    config.seed = derive_seed(12, "chain", "step", step);
    auto result = qgrpo_train(policy, engine, HintMode::JoinOrder, config);
    policy = result.policy;
    double prob = policy.probabilities("bandit_q1")[fast];
    CHECK(prob >= prev - 1e-12);
    prev = prob;
  }
}

TEST_CASE("training is reproducible bit for bit") {
  SimEngine engine(bandit_workload());
  TabularPolicy initial = make_uniform_policy(engine, HintMode::JoinOrder);
  GrpoConfig config;
  config.seed = 99;
  config.steps = 50;
  auto a = qgrpo_train(initial, engine, HintMode::JoinOrder, config);
  auto b = qgrpo_train(initial, engine, HintMode::JoinOrder, config);
  REQUIRE(a.logs.size() == b.logs.size());
  for (std::size_t i = 0; i < a.logs.size(); ++i) {
    CHECK(a.logs[i].mean_reward == b.logs[i].mean_reward);
    CHECK(a.logs[i].kl == b.logs[i].kl);
    CHECK(a.logs[i].best_prob == b.logs[i].best_prob);
  }
  CHECK(a.policy.context("bandit_q1").logits == b.policy.context("bandit_q1").logits);
}

TEST_CASE("training config requires a seed") {
  CHECK_THROWS_AS(grpo_config_from_json(nlohmann::json::object()), Error);
  auto config = grpo_config_from_json(nlohmann::json{{"seed", 5}, {"steps", 10}});
  CHECK(config.seed == 5);
  CHECK(config.steps == 10);
  CHECK(config.kl_weight == doctest::Approx(0.04));
}
