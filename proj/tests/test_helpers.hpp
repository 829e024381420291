#pragma once

#include <string>
#include <vector>

#include "hintloop/hint.hpp"
#include "hintloop/rng.hpp"

namespace hintloop::testing {

inline JoinTreeRef random_tree(std::vector<std::string> leaves, Rng& rng) {
  struct Build {
    static JoinTreeRef go(const std::vector<std::string>& seq, std::size_t lo,
                          std::size_t hi, Rng& rng) {
      if (hi - lo == 1) return make_leaf(seq[lo]);
      std::size_t split = lo + 1 + rng.uniform_index(hi - lo - 1);
      return make_join(go(seq, lo, split, rng), go(seq, split, hi, rng));
    }
  };
  for (std::size_t i = leaves.size(); i > 1; --i) {
    std::swap(leaves[i - 1], leaves[rng.uniform_index(i)]);
  }
  return Build::go(leaves, 0, leaves.size(), rng);
}

// Random canonical hint over 1..max_aliases tables.
inline Hint random_hint(Rng& rng, HintMode mode, std::size_t max_aliases = 6) {
  static const std::vector<std::string> pool = {"t", "mi", "mk", "ci", "k", "n",
                                                "cn", "mc"};
  std::size_t n = 1 + rng.uniform_index(max_aliases);
  std::vector<std::string> aliases(pool.begin(), pool.begin() + n);
  Hint h;
  h.leading = random_tree(aliases, rng);
  h.mode = mode;
  if (mode == HintMode::FullPlan) {
    const ScanMethod scans[] = {ScanMethod::SeqScan, ScanMethod::IndexScan,
                                ScanMethod::BitmapScan};
    const JoinMethod joins[] = {JoinMethod::HashJoin, JoinMethod::MergeJoin,
                                JoinMethod::NestedLoop};
    for (const auto& alias : leaf_aliases(h.leading)) {
      h.scans.push_back({scans[rng.uniform_index(3)], alias});
    }
    struct Walk {
      static void go(const JoinTreeRef& t, Rng& rng, const JoinMethod* joins,
                     std::vector<JoinClause>& out) {
        if (!t || t->is_leaf()) return;
        go(t->left, rng, joins, out);
        go(t->right, rng, joins, out);
        out.push_back({joins[rng.uniform_index(3)], leaf_aliases(t)});
      }
    };
    Walk::go(h.leading, rng, joins, h.joins);
    if (leaf_count(h.leading) == 1 && h.scans.empty()) h.mode = HintMode::JoinOrder;
  }
  return h;
}

}  // namespace hintloop::testing
