#include "hintloop/policy.hpp"

#include <algorithm>
#include <cmath>

#include "hintloop/errors.hpp"

namespace hintloop {

TabularPolicy::TabularPolicy(double temperature) : temperature_(temperature) {
  if (!(temperature > 0)) {
    raise(ErrorCode::InvalidConfig, "policy temperature must be > 0");
  }
}

void TabularPolicy::add_context(const std::string& sql_id, std::vector<Hint> hints) {
  if (hints.empty()) {
    raise(ErrorCode::InvalidConfig, "context '" + sql_id + "' has an empty hint space");
  }
  Context ctx;
  ctx.hints = std::move(hints);
  ctx.hint_keys.reserve(ctx.hints.size());
  for (const auto& h : ctx.hints) ctx.hint_keys.push_back(serialize_hint(h));
  ctx.logits.assign(ctx.hints.size(), 0.0);
  contexts_[sql_id] = std::move(ctx);
}

bool TabularPolicy::has_context(const std::string& sql_id) const {
  return contexts_.count(sql_id) > 0;
}

std::vector<std::string> TabularPolicy::context_ids() const {
  std::vector<std::string> out;
  out.reserve(contexts_.size());
  for (const auto& [id, ctx] : contexts_) out.push_back(id);
  return out;
}

const TabularPolicy::Context& TabularPolicy::context(const std::string& sql_id) const {
  auto it = contexts_.find(sql_id);
  if (it == contexts_.end()) {
    raise(ErrorCode::UnknownQuery, "policy has no context '" + sql_id + "'");
  }
  return it->second;
}

TabularPolicy::Context& TabularPolicy::context(const std::string& sql_id) {
  auto it = contexts_.find(sql_id);
  if (it == contexts_.end()) {
    raise(ErrorCode::UnknownQuery, "policy has no context '" + sql_id + "'");
  }
  return it->second;
}

std::vector<double> softmax(const std::vector<double>& logits, double temperature) {
  std::vector<double> probs(logits.size());
  double max_logit = *std::max_element(logits.begin(), logits.end());
  double total = 0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    probs[i] = std::exp((logits[i] - max_logit) / temperature);
    total += probs[i];
  }
  for (double& p : probs) p /= total;
  return probs;
}

std::vector<double> TabularPolicy::probabilities(const std::string& sql_id) const {
  const Context& ctx = context(sql_id);
  return softmax(ctx.logits, temperature_);
}

std::size_t TabularPolicy::hint_index(const std::string& sql_id,
                                      const Hint& hint) const {
  const Context& ctx = context(sql_id);
  std::string key = serialize_hint(hint);
  auto it = std::find(ctx.hint_keys.begin(), ctx.hint_keys.end(), key);
  if (it == ctx.hint_keys.end()) {
    raise(ErrorCode::UnknownHint,
          "hint '" + key + "' is outside the enumerated space of '" + sql_id + "'");
  }
  return static_cast<std::size_t>(it - ctx.hint_keys.begin());
}

std::size_t TabularPolicy::sample(const std::string& sql_id, Rng& rng) const {
  auto probs = probabilities(sql_id);
  double pick = rng.uniform01();
  double acc = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (pick < acc) return i;
  }
  return probs.size() - 1;
}

double kl_divergence(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size()) {
    raise(ErrorCode::SupportMismatch,
          "distributions of size " + std::to_string(p.size()) + " and " +
              std::to_string(q.size()));
  }
  constexpr double kFloor = 1e-12;
  double kl = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    double pi = std::max(p[i], kFloor);
    double qi = std::max(q[i], kFloor);
    kl += pi * std::log(pi / qi);
  }
  return std::max(kl, 0.0);
}

double kl_divergence(const TabularPolicy& p, const TabularPolicy& q,
                     const std::string& sql_id) {
  return kl_divergence(p.probabilities(sql_id), q.probabilities(sql_id));
}

}  // namespace hintloop
