#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hintloop/hint.hpp"

namespace hintloop {

// One scored group of G candidate hints for the same query.
struct RewardGroup {
  struct Member {
    Hint hint;
    double latency_ms = 0;
    double ratio = 0;      // baseline / latency
    double reward = 0;     // tanh(ln ratio), in (-1, 1)
    double advantage = 0;  // group-standardized reward
  };
  std::string sql_id;
  double baseline_latency_ms = 0;
  std::vector<Member> members;
  std::size_t group_size() const { return members.size(); }
};

struct GrpoConfig {
  std::size_t group_size = 4;    // G >= 2
  double kl_weight = 0.04;       // beta >= 0
  double clip_epsilon = 0.2;     // > 0
  double std_floor = 1e-8;       // > 0
  double learning_rate = 0.1;
  std::size_t steps = 200;       // M
  std::uint64_t seed = 1;
  // Caps the L2 norm of a per-context logit update; keeps extreme kl_weight
  // settings from oscillating the tabular policy to non-finite values.
  double update_clip = 1.0;
};

// Latency reward tanh(ln ratio); strictly increasing, antisymmetric in
// ratio <-> 1/ratio, bounded in (-1, 1). Throws NonPositiveRatio.
double latency_reward(double ratio);

// Rewards standardized with population std; all-zero when std < std_floor.
std::vector<double> normalize_advantages(const std::vector<double>& rewards,
                                         double std_floor = 1e-8);

// Ratios, rewards and advantages for one group of candidate latencies.
RewardGroup score_group(double baseline_ms, const std::vector<double>& latencies,
                        double std_floor = 1e-8);

// Per-sample update coefficient: advantage + beta * (prob_ref/prob_theta - 1).
double gradient_coefficient(double advantage, double prob_ref, double prob_theta,
                            double beta);

// PPO-style clipped surrogate term: min(rho*A, clamp(rho, 1-eps, 1+eps)*A).
double clipped_surrogate(double rho, double advantage, double clip_epsilon);

}  // namespace hintloop
