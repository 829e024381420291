#include "hintloop/workload_gen.hpp"

#include <cmath>
#include <deque>
#include <map>

#include "hintloop/errors.hpp"
#include "hintloop/generator.hpp"
#include "hintloop/rng.hpp"

namespace hintloop {

namespace {

struct PoolEntry {
  const char* alias;
  const char* table;
};

constexpr PoolEntry kAliasPool[] = {
    {"t", "title"},
    {"mi", "movie_info"},
    {"mk", "movie_keyword"},
    {"ci", "cast_info"},
    {"k", "keyword"},
    {"n", "name"},
    {"cn", "company_name"},
    {"mc", "movie_companies"},
    {"an", "aka_name"},
    {"it", "info_type"},
    {"kt", "kind_type"},
    {"rt", "role_type"},
    {"cc", "complete_cast"},
    {"pi", "person_info"},
};

std::string synth_sql(const std::string& sql_id,
                      const std::vector<std::size_t>& picks) {
  std::string from;
  for (std::size_t i = 0; i < picks.size(); ++i) {
    if (i) from += ", ";
    from += std::string(kAliasPool[picks[i]].table) + " " + kAliasPool[picks[i]].alias;
  }
  std::string where;
  for (std::size_t i = 0; i + 1 < picks.size(); ++i) {
    if (i) where += " AND ";
    where += std::string(kAliasPool[picks[i]].alias) + ".id = " +
             kAliasPool[picks[i + 1]].alias + "." +
             kAliasPool[picks[i]].table + "_id";
  }
  if (!where.empty()) where += " AND ";
  where += std::string(kAliasPool[picks[0]].alias) + ".note LIKE '%" + sql_id + "%'";
  return "SELECT COUNT(*) FROM " + from + " WHERE " + where + ";";
}

// BFS over the single-edit mutation graph, distances from the planted
// optimum to every hint in the space.
std::vector<std::size_t> bfs_distances(const std::vector<Hint>& space,
                                       std::size_t start) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < space.size(); ++i) {
    index[serialize_hint(space[i])] = i;
  }
  constexpr std::size_t kUnreached = SIZE_MAX;
  std::vector<std::size_t> dist(space.size(), kUnreached);
  dist[start] = 0;
  std::deque<std::size_t> queue{start};
  while (!queue.empty()) {
    std::size_t at = queue.front();
    queue.pop_front();
    for (const auto& [kind, neighbor] : mutation_neighbors(space[at])) {
      auto it = index.find(serialize_hint(neighbor));
      if (it == index.end()) continue;
      if (dist[it->second] == kUnreached) {
        dist[it->second] = dist[at] + 1;
        queue.push_back(it->second);
      }
    }
  }
  for (std::size_t d : dist) {
    if (d == kUnreached) {
      raise(ErrorCode::InvalidConfig,
            "mutation graph does not cover the hint space");
    }
  }
  return dist;
}

}  // namespace

SimWorkload synth_workload(const WorkloadGenConfig& config) {
  if (config.query_count == 0 || config.min_aliases < 2 ||
      config.max_aliases < config.min_aliases ||
      config.max_aliases > std::size(kAliasPool) ||
      !(config.optimal_factor > 0 && config.optimal_factor < 1)) {
    raise(ErrorCode::InvalidConfig, "workload generator configuration out of range");
  }

  SimWorkload wl;
  wl.name = config.name;
  wl.mode = config.mode;
  wl.timeout_ms = config.timeout_ms;
  wl.noise = config.noise;
  wl.seed = derive_seed(config.seed, "workload", config.name);

  for (std::size_t qi = 1; qi <= config.query_count; ++qi) {
    SimQuery q;
    char id_buf[32];
    std::snprintf(id_buf, sizeof(id_buf), "%s_q%02zu", config.name.c_str(), qi);
    q.sql_id = id_buf;

    Rng rng(derive_seed(config.seed, "query", q.sql_id));
    std::size_t n = config.min_aliases +
                    rng.uniform_index(config.max_aliases - config.min_aliases + 1);

    std::vector<std::size_t> pool_indices(std::size(kAliasPool));
    for (std::size_t i = 0; i < pool_indices.size(); ++i) pool_indices[i] = i;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t j = i + rng.uniform_index(pool_indices.size() - i);
      std::swap(pool_indices[i], pool_indices[j]);
    }
    pool_indices.resize(n);
    for (std::size_t idx : pool_indices) q.aliases.push_back(kAliasPool[idx].alias);
    q.sql = synth_sql(q.sql_id, pool_indices);

    for (const auto& alias : q.aliases) {
      q.stats.table_cardinalities[alias] =
          static_cast<double>(100 + rng.uniform_index(999900));
      q.stats.filter_selectivities[alias] =
          std::round(rng.uniform(0.01, 1.0) * 1e4) / 1e4;
    }

    auto space = enumerate_hints(q.aliases, config.mode);
    std::size_t star = rng.uniform_index(space.size());
    auto dist = bfs_distances(space, star);
    std::size_t max_d = 0;
    for (std::size_t d : dist) max_d = std::max(max_d, d);

    std::size_t default_idx = star;
    if (max_d > 0) {
      std::vector<std::size_t> farthest;
      for (std::size_t i = 0; i < space.size(); ++i) {
        if (dist[i] == max_d) farthest.push_back(i);
      }
      default_idx = farthest[rng.uniform_index(farthest.size())];
    }

    double base = rng.uniform(config.base_latency_lo_ms, config.base_latency_hi_ms);
    for (std::size_t i = 0; i < space.size(); ++i) {
      std::string key = serialize_hint(space[i]);
      double ratio = config.optimal_factor;
      if (max_d > 0) {
        ratio += (1.0 - config.optimal_factor) *
                 (static_cast<double>(dist[i]) / static_cast<double>(max_d));
      }
      if (i != star && i != default_idx && config.wobble > 0) {
        Rng wobble_rng(derive_seed(config.seed, "wobble", q.sql_id + "\x1f" + key));
        ratio *= 1.0 + config.wobble * wobble_rng.uniform01();
      }
      q.latency_by_hint[key] = std::round(base * ratio * 1e6) / 1e6;
    }
    q.default_hint = space[default_idx];
    q.default_hint_text = serialize_hint(q.default_hint);
    wl.queries.push_back(std::move(q));
  }
  return wl;
}

}  // namespace hintloop
