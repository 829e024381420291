#include "hintloop/trainer.hpp"

#include <cmath>
#include <fstream>
#include <map>

#include "hintloop/errors.hpp"

namespace hintloop {

double sft_step(TabularPolicy& policy, const std::vector<SftPair>& batch,
                double learning_rate) {
  if (batch.empty()) {
    raise(ErrorCode::InvalidConfig, "sft_step on an empty batch");
  }
  std::map<std::string, std::vector<double>> grads;
  double nll = 0;
  for (const auto& pair : batch) {
    std::size_t idx = policy.hint_index(pair.sql_id, pair.reference_hint);
    auto probs = policy.probabilities(pair.sql_id);
    nll += -std::log(probs[idx]);
    auto [it, inserted] =
        grads.try_emplace(pair.sql_id, std::vector<double>(probs.size(), 0.0));
    auto& grad = it->second;
    for (std::size_t j = 0; j < probs.size(); ++j) {
      grad[j] += ((j == idx) ? 1.0 : 0.0) - probs[j];
    }
  }
  const double scale = learning_rate / static_cast<double>(batch.size());
  for (auto& [sql_id, grad] : grads) {
    auto& logits = policy.context(sql_id).logits;
    for (std::size_t j = 0; j < grad.size(); ++j) {
      logits[j] += scale * grad[j];
    }
  }
  return nll / static_cast<double>(batch.size());
}

TabularPolicy make_uniform_policy(const SimEngine& engine, HintMode mode) {
  TabularPolicy policy;
  for (const auto& q : engine.workload().queries) {
    policy.add_context(q.sql_id, engine.enumerate_hint_space(q.sql_id, mode));
  }
  return policy;
}

QgrpoResult qgrpo_train(const TabularPolicy& initial, SimEngine& engine,
                        HintMode mode, const GrpoConfig& config) {
  if (config.group_size < 1) {
    raise(ErrorCode::InvalidConfig, "group_size must be >= 1");
  }
  const SimWorkload& workload = engine.workload();
  for (const auto& q : workload.queries) {
    if (!initial.has_context(q.sql_id)) {
      raise(ErrorCode::UnknownQuery,
            "policy has no context for workload query '" + q.sql_id + "'");
    }
  }

  TabularPolicy pi_theta = initial;
  const TabularPolicy pi_ref = initial;

  // Oracle-best index per context, for the best_prob log column.
  std::map<std::string, std::size_t> best_index;
  for (const auto& q : workload.queries) {
    auto [hint, ms] = engine.oracle_optimum(q.sql_id, mode);
    best_index[q.sql_id] = pi_theta.hint_index(q.sql_id, hint);
  }

  QgrpoResult result;
  for (std::size_t step = 1; step <= config.steps; ++step) {
    const TabularPolicy pi_old = pi_theta;  // snapshot the sampling policy

    double reward_sum = 0;
    std::size_t reward_count = 0;
    for (const auto& q : workload.queries) {
      Rng rng(derive_seed(config.seed, "qgrpo", q.sql_id, step));

      const auto& ctx = pi_old.context(q.sql_id);
      std::vector<std::size_t> picks(config.group_size);
      for (auto& pick : picks) pick = pi_old.sample(q.sql_id, rng);

      EngineRequest baseline_req{q.sql_id, q.sql, std::nullopt, workload.timeout_ms};
      double t_d = engine.execute(baseline_req).latency_ms;

      std::vector<double> latencies;
      latencies.reserve(picks.size());
      for (std::size_t pick : picks) {
        EngineRequest req{q.sql_id, q.sql, ctx.hints[pick], workload.timeout_ms};
        latencies.push_back(engine.execute(req).latency_ms);
      }
      RewardGroup group = score_group(t_d, latencies, config.std_floor);
      for (const auto& m : group.members) reward_sum += m.reward;
      reward_count += group.members.size();

      auto probs_theta = pi_theta.probabilities(q.sql_id);
      auto probs_ref = pi_ref.probabilities(q.sql_id);
      std::vector<double> delta(probs_theta.size(), 0.0);
      for (std::size_t i = 0; i < picks.size(); ++i) {
        double c = gradient_coefficient(group.members[i].advantage,
                                        probs_ref[picks[i]],
                                        probs_theta[picks[i]], config.kl_weight);
        for (std::size_t j = 0; j < delta.size(); ++j) {
          delta[j] += c * (((j == picks[i]) ? 1.0 : 0.0) - probs_theta[j]);
        }
      }
      double scale =
          config.learning_rate / static_cast<double>(picks.size());
      double norm2 = 0;
      for (double& d : delta) {
        d *= scale;
        norm2 += d * d;
      }
      double norm = std::sqrt(norm2);
      if (config.update_clip > 0 && norm > config.update_clip) {
        for (double& d : delta) d *= config.update_clip / norm;
      }
      auto& logits = pi_theta.context(q.sql_id).logits;
      for (std::size_t j = 0; j < delta.size(); ++j) {
        logits[j] += delta[j];
        if (!std::isfinite(logits[j])) {
          raise(ErrorCode::NonFiniteUpdate,
                "non-finite logit for '" + q.sql_id + "' at step " +
                    std::to_string(step));
        }
      }
    }

    TrainStepLog log;
    log.step = step;
    log.mean_reward = reward_count ? reward_sum / static_cast<double>(reward_count) : 0;
    double kl_sum = 0, best_sum = 0;
    for (const auto& q : workload.queries) {
      kl_sum += kl_divergence(pi_theta, pi_ref, q.sql_id);
      best_sum += pi_theta.probabilities(q.sql_id)[best_index[q.sql_id]];
    }
    log.kl = kl_sum / static_cast<double>(workload.queries.size());
    log.best_prob = best_sum / static_cast<double>(workload.queries.size());
    result.logs.push_back(log);
  }
  result.policy = std::move(pi_theta);
  return result;
}

GrpoConfig grpo_config_from_json(const nlohmann::json& doc) {
  GrpoConfig config;
  if (!doc.contains("seed")) {
    raise(ErrorCode::InvalidConfig, "training config must set a seed");
  }
  config.seed = doc["seed"].get<std::uint64_t>();
  config.group_size = doc.value("group_size", config.group_size);
  config.kl_weight = doc.value("kl_weight", config.kl_weight);
  config.clip_epsilon = doc.value("clip_epsilon", config.clip_epsilon);
  config.std_floor = doc.value("std_floor", config.std_floor);
  config.learning_rate = doc.value("learning_rate", config.learning_rate);
  config.steps = doc.value("steps", config.steps);
  config.update_clip = doc.value("update_clip", config.update_clip);
  if (config.group_size < 1 || config.kl_weight < 0 || config.clip_epsilon <= 0 ||
      config.std_floor <= 0) {
    raise(ErrorCode::InvalidConfig, "training config out of range");
  }
  return config;
}

void write_train_log_csv(const std::vector<TrainStepLog>& logs,
                         const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    raise(ErrorCode::Io, "cannot write " + path.string());
  }
  out << "step,mean_reward,kl,best_prob\n";
  char buf[160];
  for (const auto& log : logs) {
    std::snprintf(buf, sizeof(buf), "%zu,%.9f,%.9f,%.9f\n", log.step,
                  log.mean_reward, log.kl, log.best_prob);
    out << buf;
  }
}

}  // namespace hintloop
