#pragma once

#include <map>
#include <string>
#include <vector>

#include "hintloop/hint.hpp"
#include "hintloop/rng.hpp"

namespace hintloop {

// Softmax policy over the enumerated hint space of each query. Stands in for
// generator weights at desk scale: everything the training loop manipulates
// (sampling, log-probabilities, KL to a reference) is preserved.
class TabularPolicy {
 public:
  struct Context {
    std::vector<Hint> hints;
    std::vector<std::string> hint_keys;  // canonical serializations
    std::vector<double> logits;
  };

  TabularPolicy() = default;
  explicit TabularPolicy(double temperature);

  // Registers a context with uniform logits over its hint space.
  void add_context(const std::string& sql_id, std::vector<Hint> hints);

  bool has_context(const std::string& sql_id) const;
  std::vector<std::string> context_ids() const;
  const Context& context(const std::string& sql_id) const;
  Context& context(const std::string& sql_id);

  std::vector<double> probabilities(const std::string& sql_id) const;
  double temperature() const { return temperature_; }

  // Index of a hint within its context's space; throws UnknownHint.
  std::size_t hint_index(const std::string& sql_id, const Hint& hint) const;

  std::size_t sample(const std::string& sql_id, Rng& rng) const;

 private:
  double temperature_ = 1.0;
  std::map<std::string, Context> contexts_;
};

// KL(p || q) over one context's distributions, with a probability floor of
// 1e-12. Throws SupportMismatch when sizes differ.
double kl_divergence(const std::vector<double>& p, const std::vector<double>& q);

// KL between two policies for a given context id, averaged caller-side.
double kl_divergence(const TabularPolicy& p, const TabularPolicy& q,
                     const std::string& sql_id);

std::vector<double> softmax(const std::vector<double>& logits, double temperature);

}  // namespace hintloop
