#include "hintloop/generator.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <span>

#include <nlohmann/json.hpp>

#include "httplib.h"
#include "hintloop/errors.hpp"

namespace hintloop {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Structural edits
// ---------------------------------------------------------------------------

namespace {

JoinTreeRef rebuild_shape(const JoinTreeRef& shape,
                          std::span<const std::string> leaves,
                          std::size_t& cursor) {
  if (shape->is_leaf()) {
    return make_leaf(leaves[cursor++]);
  }
  JoinTreeRef left = rebuild_shape(shape->left, leaves, cursor);
  JoinTreeRef right = rebuild_shape(shape->right, leaves, cursor);
  return make_join(std::move(left), std::move(right));
}

using Wrap = std::function<JoinTreeRef(JoinTreeRef)>;

void collect_rotations(const JoinTreeRef& node, const Wrap& wrap,
                       std::vector<JoinTreeRef>& out) {
  if (node->is_leaf()) return;
  JoinTreeRef a = node->left;
  JoinTreeRef b = node->right;
  if (!a->is_leaf()) {
    // ((x y) b) -> (x (y b))
    out.push_back(wrap(make_join(a->left, make_join(a->right, b))));
  }
  if (!b->is_leaf()) {
    // (a (x y)) -> ((a x) y)
    out.push_back(wrap(make_join(make_join(a, b->left), b->right)));
  }
  collect_rotations(a, [wrap, b](JoinTreeRef t) { return wrap(make_join(std::move(t), b)); },
                    out);
  collect_rotations(b, [wrap, a](JoinTreeRef t) { return wrap(make_join(a, std::move(t))); },
                    out);
}

// Carries methods from the old hint onto a restructured tree. Persisting
// subtrees keep their method; new subtrees inherit the smallest old join
// that contains them.
Hint rebuild_with_tree(const JoinTreeRef& tree, const Hint& old) {
  Hint out;
  out.mode = old.mode;
  out.leading = tree;
  if (old.mode == HintMode::JoinOrder) return out;

  out.scans = old.scans;

  std::vector<std::pair<std::vector<std::string>, JoinMethod>> old_joins;
  for (const auto& j : old.joins) {
    std::vector<std::string> key = j.aliases;
    std::sort(key.begin(), key.end());
    old_joins.push_back({std::move(key), j.method});
  }
  std::sort(old_joins.begin(), old_joins.end(),
            [](const auto& a, const auto& b) { return a.first.size() < b.first.size(); });

  struct Walk {
    static void go(const JoinTreeRef& t,
                   const std::vector<std::pair<std::vector<std::string>, JoinMethod>>& old_joins,
                   std::vector<JoinClause>& joins) {
      if (!t || t->is_leaf()) return;
      go(t->left, old_joins, joins);
      go(t->right, old_joins, joins);
      std::vector<std::string> key = leaf_aliases(t);
      std::sort(key.begin(), key.end());
      JoinMethod method = JoinMethod::HashJoin;
      bool found = false;
      for (const auto& [set, m] : old_joins) {
        if (set == key) {
          method = m;
          found = true;
          break;
        }
      }
      if (!found) {
        for (const auto& [set, m] : old_joins) {
          if (set.size() >= key.size() &&
              std::includes(set.begin(), set.end(), key.begin(), key.end())) {
            method = m;
            break;
          }
        }
      }
      joins.push_back({method, leaf_aliases(t)});
    }
  };
  Walk::go(tree, old_joins, out.joins);
  return out;
}

}  // namespace

std::vector<std::pair<MutationKind, Hint>> mutation_neighbors(const Hint& hint) {
  std::vector<std::pair<MutationKind, Hint>> out;
  if (!hint.leading) return out;
  auto leaves = leaf_aliases(hint.leading);

  for (std::size_t i = 0; i < leaves.size(); ++i) {
    for (std::size_t j = i + 1; j < leaves.size(); ++j) {
      if (leaves[i] == leaves[j]) continue;
      std::vector<std::string> swapped = leaves;
      std::swap(swapped[i], swapped[j]);
      std::size_t cursor = 0;
      JoinTreeRef tree = rebuild_shape(hint.leading, swapped, cursor);
      out.push_back({MutationKind::LeafSwap, rebuild_with_tree(tree, hint)});
    }
  }

  std::vector<JoinTreeRef> rotated;
  collect_rotations(hint.leading, [](JoinTreeRef t) { return t; }, rotated);
  for (const auto& tree : rotated) {
    out.push_back({MutationKind::Rotate, rebuild_with_tree(tree, hint)});
  }

  if (hint.mode == HintMode::FullPlan) {
    const JoinMethod join_methods[] = {JoinMethod::HashJoin, JoinMethod::MergeJoin,
                                       JoinMethod::NestedLoop};
    for (std::size_t i = 0; i < hint.joins.size(); ++i) {
      for (JoinMethod m : join_methods) {
        if (m == hint.joins[i].method) continue;
        Hint h = hint;
        h.joins[i].method = m;
        out.push_back({MutationKind::JoinFlip, std::move(h)});
      }
    }
    const ScanMethod scan_methods[] = {ScanMethod::SeqScan, ScanMethod::IndexScan,
                                       ScanMethod::BitmapScan};
    for (std::size_t i = 0; i < hint.scans.size(); ++i) {
      for (ScanMethod m : scan_methods) {
        if (m == hint.scans[i].method) continue;
        Hint h = hint;
        h.scans[i].method = m;
        out.push_back({MutationKind::ScanFlip, std::move(h)});
      }
    }
  }
  return out;
}

Hint mutate_hint(const Hint& hint, std::uint64_t seed) {
  auto neighbors = mutation_neighbors(hint);
  if (neighbors.empty()) return hint;
  Rng rng(seed);
  return neighbors[rng.uniform_index(neighbors.size())].second;
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

namespace {

JoinTreeRef random_tree(std::span<const std::string> aliases, Rng& rng) {
  if (aliases.size() == 1) return make_leaf(aliases[0]);
  std::size_t split = 1 + rng.uniform_index(aliases.size() - 1);
  return make_join(random_tree(aliases.subspan(0, split), rng),
                   random_tree(aliases.subspan(split), rng));
}

Hint random_join_order(const std::vector<std::string>& aliases, Rng& rng) {
  std::vector<std::string> shuffled = aliases;
  for (std::size_t i = shuffled.size(); i > 1; --i) {
    std::swap(shuffled[i - 1], shuffled[rng.uniform_index(i)]);
  }
  Hint h;
  h.mode = HintMode::JoinOrder;
  h.leading = random_tree(shuffled, rng);
  return h;
}

Hint mutate_weighted(const Hint& hint, const MutationWeights& weights, Rng& rng) {
  auto neighbors = mutation_neighbors(hint);
  if (neighbors.empty()) return hint;
  std::map<MutationKind, std::vector<const Hint*>> by_kind;
  for (const auto& [kind, h] : neighbors) by_kind[kind].push_back(&h);

  std::vector<MutationKind> kinds;
  std::vector<double> kind_weights;
  auto push = [&](MutationKind kind, double w) {
    if (by_kind.count(kind)) {
      kinds.push_back(kind);
      kind_weights.push_back(w);
    }
  };
  push(MutationKind::LeafSwap, weights.leaf_swap);
  push(MutationKind::Rotate, weights.rotate);
  push(MutationKind::JoinFlip, weights.join_flip);
  push(MutationKind::ScanFlip, weights.scan_flip);

  const auto& bucket = by_kind[kinds[rng.weighted_index(kind_weights)]];
  return *bucket[rng.uniform_index(bucket.size())];
}

std::string remote_generate(const RemoteGenerator& remote,
                            const PromptBundle& prompt) {
  std::string endpoint = remote.endpoint;
  std::string path = "/v1/chat/completions";
  auto scheme_end = endpoint.find("://");
  std::size_t host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
  auto path_start = endpoint.find('/', host_start);
  if (path_start != std::string::npos) {
    path = endpoint.substr(path_start);
    endpoint = endpoint.substr(0, path_start);
  }

  httplib::Client client(endpoint);
  client.set_connection_timeout(static_cast<time_t>(remote.timeout_s),
                                static_cast<time_t>(remote.timeout_s * 1e6) % 1000000);
  client.set_read_timeout(static_cast<time_t>(remote.timeout_s), 0);

  httplib::Headers headers;
  if (!remote.auth_token_env.empty()) {
    if (const char* token = std::getenv(remote.auth_token_env.c_str())) {
      headers.emplace("Authorization", std::string("Bearer ") + token);
    }
  }

  json body;
  body["model"] = remote.model;
  body["messages"] = json::array({
      json{{"role", "system"}, {"content", prompt.system_prompt}},
      json{{"role", "user"}, {"content", prompt.user_rendered}},
  });

  auto res = client.Post(path, headers, body.dump(), "application/json");
  if (!res) {
    auto err = res.error();
    if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read) {
      raise(ErrorCode::RemoteTimeout,
            "no response from " + remote.endpoint + " within " +
                std::to_string(remote.timeout_s) + "s");
    }
    raise(ErrorCode::RemoteUnavailable,
          "cannot reach " + remote.endpoint + ": " + httplib::to_string(err));
  }
  if (res->status != 200) {
    raise(ErrorCode::RemoteUnavailable,
          remote.endpoint + " returned HTTP " + std::to_string(res->status));
  }
  json reply = json::parse(res->body, nullptr, false);
  if (reply.is_discarded() || !reply.contains("choices") ||
      reply["choices"].empty() ||
      !reply["choices"][0].contains("message")) {
    raise(ErrorCode::RemoteUnavailable,
          remote.endpoint + " returned a malformed chat completion");
  }
  return reply["choices"][0]["message"].value("content", "");
}

}  // namespace

HintGenerator::HintGenerator(GeneratorSpec spec) : spec_(std::move(spec)) {
  if (const auto* scripted = std::get_if<ScriptedGenerator>(&spec_.kind)) {
    if (scripted->outputs.empty()) {
      raise(ErrorCode::InvalidConfig, "scripted generator needs at least one output");
    }
  }
  if (const auto* mutating = std::get_if<MutatingGenerator>(&spec_.kind)) {
    const auto& w = mutating->weights;
    double total = w.leaf_swap + w.rotate + w.join_flip + w.scan_flip;
    if (std::abs(total - 1.0) > 1e-9) {
      raise(ErrorCode::InvalidConfig, "mutation weights must sum to 1");
    }
  }
}

std::string HintGenerator::generate_raw(const PromptBundle& prompt,
                                        const std::vector<std::string>& known_aliases) {
  if (const auto* scripted = std::get_if<ScriptedGenerator>(&spec_.kind)) {
    std::size_t call = prompt.iteration >= 1
                           ? static_cast<std::size_t>(prompt.iteration - 1)
                           : 0;
    return scripted->outputs[call % scripted->outputs.size()];
  }
  if (const auto* mutating = std::get_if<MutatingGenerator>(&spec_.kind)) {
    Rng rng(derive_seed(mutating->seed, "generate", prompt.sql_id,
                        static_cast<std::uint64_t>(prompt.iteration)));
    std::optional<Hint> source;
    if (prompt.best) {
      source = prompt.best->hint;
    } else if (!prompt.references.empty()) {
      source = prompt.references.front().hint;
    } else if (!known_aliases.empty()) {
      source = random_join_order(known_aliases, rng);
    }
    if (!source) return "";
    return serialize_hint(mutate_weighted(*source, mutating->weights, rng));
  }
  return remote_generate(std::get<RemoteGenerator>(spec_.kind), prompt);
}

HintOrError HintGenerator::generate(const PromptBundle& prompt,
                                    const std::vector<std::string>& known_aliases) {
  std::string raw = generate_raw(prompt, known_aliases);
  return normalize_generated_text(raw, known_aliases, spec_.output_budget);
}

}  // namespace hintloop
