#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hintloop/engine.hpp"
#include "hintloop/policy.hpp"
#include "hintloop/reward.hpp"

namespace hintloop {

struct SftPair {
  std::string sql_id;
  std::string prompt_text;  // provenance; the tabular policy keys on sql_id
  Hint reference_hint;
};

// One gradient step on the mean negative log-likelihood of the reference
// hints; logit update per pair is lr * (1[h = h*] - pi(h|ctx)), averaged over
// the batch. Returns the pre-step mean NLL.
double sft_step(TabularPolicy& policy, const std::vector<SftPair>& batch,
                double learning_rate);

struct TrainStepLog {
  std::size_t step = 0;
  double mean_reward = 0;
  double kl = 0;         // mean KL(pi_theta || pi_ref) over contexts
  double best_prob = 0;  // mean probability of the oracle-best hint
};

struct QgrpoResult {
  TabularPolicy policy;
  std::vector<TrainStepLog> logs;
};

// Uniform policy over the enumerated hint space of every workload query.
TabularPolicy make_uniform_policy(const SimEngine& engine, HintMode mode);

// Group-relative training loop: snapshot the sampling policy each step, draw
// G hints per context, score them against the per-step baseline execution,
// standardize within the group, and ascend with the per-sample coefficient
// advantage + beta * (pi_ref/pi_theta - 1) on the score-function gradient.
// The exact update is documented in docs/qgrpo-math.md.
QgrpoResult qgrpo_train(const TabularPolicy& initial, SimEngine& engine,
                        HintMode mode, const GrpoConfig& config);

GrpoConfig grpo_config_from_json(const nlohmann::json& doc);

void write_train_log_csv(const std::vector<TrainStepLog>& logs,
                         const std::filesystem::path& path);

}  // namespace hintloop
