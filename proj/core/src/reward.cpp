#include "hintloop/reward.hpp"

#include <algorithm>
#include <cmath>

#include "hintloop/errors.hpp"

namespace hintloop {

double latency_reward(double ratio) {
  if (!(ratio > 0)) {
    raise(ErrorCode::NonPositiveRatio,
          "latency improvement ratio must be > 0, got " + std::to_string(ratio));
  }
  return std::tanh(std::log(ratio));
}

std::vector<double> normalize_advantages(const std::vector<double>& rewards,
                                         double std_floor) {
  std::vector<double> out(rewards.size(), 0.0);
  if (rewards.empty()) return out;
  double mean = 0;
  for (double r : rewards) mean += r;
  mean /= static_cast<double>(rewards.size());
  double var = 0;
  for (double r : rewards) var += (r - mean) * (r - mean);
  var /= static_cast<double>(rewards.size());
  double std = std::sqrt(var);
  if (std < std_floor) return out;
  for (std::size_t i = 0; i < rewards.size(); ++i) {
    out[i] = (rewards[i] - mean) / std;
  }
  return out;
}

RewardGroup score_group(double baseline_ms, const std::vector<double>& latencies,
                        double std_floor) {
  if (!(baseline_ms > 0)) {
    raise(ErrorCode::NonPositiveRatio, "baseline latency must be > 0");
  }
  RewardGroup group;
  group.baseline_latency_ms = baseline_ms;
  std::vector<double> rewards;
  rewards.reserve(latencies.size());
  for (double t : latencies) {
    if (!(t > 0)) {
      raise(ErrorCode::NonPositiveRatio, "latency must be > 0");
    }
    RewardGroup::Member m;
    m.latency_ms = t;
    m.ratio = baseline_ms / t;
    m.reward = latency_reward(m.ratio);
    rewards.push_back(m.reward);
    group.members.push_back(std::move(m));
  }
  auto advantages = normalize_advantages(rewards, std_floor);
  for (std::size_t i = 0; i < advantages.size(); ++i) {
    group.members[i].advantage = advantages[i];
  }
  return group;
}

double gradient_coefficient(double advantage, double prob_ref, double prob_theta,
                            double beta) {
  if (!(prob_theta > 0)) {
    raise(ErrorCode::ZeroPolicyProbability,
          "policy probability must be > 0 in the KL ratio");
  }
  return advantage + beta * (prob_ref / prob_theta - 1.0);
}

double clipped_surrogate(double rho, double advantage, double clip_epsilon) {
  double clamped = std::clamp(rho, 1.0 - clip_epsilon, 1.0 + clip_epsilon);
  return std::min(rho * advantage, clamped * advantage);
}

}  // namespace hintloop
