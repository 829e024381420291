#include "hintloop/engine.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hintloop/errors.hpp"
#include "hintloop/rng.hpp"
#include "hintloop/toml.hpp"

namespace hintloop {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Workload files
// ---------------------------------------------------------------------------

static SimWorkload workload_from_json(const json& doc) {
  SimWorkload wl;
  wl.name = doc.value("name", "workload");
  wl.mode = hint_mode_from_string(doc.value("mode", "join_order"));
  wl.timeout_ms = doc.value("timeout_ms", 10000.0);
  wl.noise = doc.value("noise", 0.0);
  wl.seed = doc.value("seed", std::uint64_t{1});
  if (wl.noise < 0) {
    raise(ErrorCode::SchemaViolation, "workload noise must be >= 0");
  }
  if (wl.timeout_ms <= 0) {
    raise(ErrorCode::SchemaViolation, "workload timeout_ms must be > 0");
  }
  if (!doc.contains("queries") || !doc["queries"].is_array()) {
    raise(ErrorCode::SchemaViolation, "workload has no queries array");
  }
  for (const auto& q : doc["queries"]) {
    SimQuery query;
    for (const char* key : {"sql_id", "sql", "aliases", "default_hint", "latencies"}) {
      if (!q.contains(key)) {
        raise(ErrorCode::SchemaViolation,
              "workload query missing '" + std::string(key) + "'");
      }
    }
    query.sql_id = q["sql_id"].get<std::string>();
    query.sql = q["sql"].get<std::string>();
    query.aliases = q["aliases"].get<std::vector<std::string>>();
    query.default_hint_text = q["default_hint"].get<std::string>();
    auto parsed = parse_hint(query.default_hint_text, query.aliases);
    if (is_error(parsed)) {
      raise(ErrorCode::SchemaViolation,
            query.sql_id + ": default_hint does not parse: " +
                get_error(parsed).detail);
    }
    query.default_hint = get_hint(parsed);
    query.default_hint_text = serialize_hint(query.default_hint);
    for (auto it = q["latencies"].begin(); it != q["latencies"].end(); ++it) {
      double ms = it.value().get<double>();
      if (ms < 0) {
        raise(ErrorCode::SchemaViolation,
              query.sql_id + ": negative latency for hint '" + it.key() + "'");
      }
      query.latency_by_hint[it.key()] = ms;
    }
    if (!query.latency_by_hint.count(query.default_hint_text)) {
      raise(ErrorCode::SchemaViolation,
            query.sql_id + ": default_hint has no latency entry");
    }
    if (q.contains("cardinalities")) {
      for (auto it = q["cardinalities"].begin(); it != q["cardinalities"].end(); ++it) {
        double rows = it.value().get<double>();
        if (rows < 0) {
          raise(ErrorCode::SchemaViolation, query.sql_id + ": negative cardinality");
        }
        query.stats.table_cardinalities[it.key()] = rows;
      }
    }
    for (const auto& alias : query.aliases) {
      if (!query.stats.table_cardinalities.count(alias)) {
        query.stats.table_cardinalities[alias] = 1000;
      }
    }
    if (q.contains("selectivities")) {
      for (auto it = q["selectivities"].begin(); it != q["selectivities"].end(); ++it) {
        double sel = it.value().get<double>();
        if (sel < 0 || sel > 1) {
          raise(ErrorCode::SchemaViolation,
                query.sql_id + ": selectivity outside [0, 1]");
        }
        query.stats.filter_selectivities[it.key()] = sel;
      }
    }
    wl.queries.push_back(std::move(query));
  }
  return wl;
}

SimWorkload load_workload(const std::filesystem::path& path) {
  if (path.extension() == ".toml") {
    return workload_from_json(parse_toml_file(path));
  }
  std::ifstream in(path);
  if (!in) {
    raise(ErrorCode::Io, "cannot read workload " + path.string());
  }
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) {
    raise(ErrorCode::SchemaViolation, path.string() + " is not valid JSON");
  }
  return workload_from_json(doc);
}

void save_workload(const SimWorkload& workload, const std::filesystem::path& path) {
  ordered_json doc;
  doc["name"] = workload.name;
  doc["mode"] = std::string(to_string(workload.mode));
  doc["timeout_ms"] = workload.timeout_ms;
  doc["noise"] = workload.noise;
  doc["seed"] = workload.seed;
  doc["queries"] = ordered_json::array();
  for (const auto& q : workload.queries) {
    ordered_json jq;
    jq["sql_id"] = q.sql_id;
    jq["sql"] = q.sql;
    jq["aliases"] = q.aliases;
    jq["cardinalities"] = q.stats.table_cardinalities;
    jq["selectivities"] = q.stats.filter_selectivities;
    jq["default_hint"] = q.default_hint_text;
    jq["latencies"] = q.latency_by_hint;
    doc["queries"].push_back(std::move(jq));
  }
  std::ofstream out(path);
  if (!out) {
    raise(ErrorCode::Io, "cannot write workload " + path.string());
  }
  out << doc.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// SimEngine
// ---------------------------------------------------------------------------

SimEngine::SimEngine(SimWorkload workload) : workload_(std::move(workload)) {
  for (std::size_t i = 0; i < workload_.queries.size(); ++i) {
    index_[workload_.queries[i].sql_id] = i;
  }
}

const SimQuery& SimEngine::query(const std::string& sql_id) const {
  auto it = index_.find(sql_id);
  if (it == index_.end()) {
    raise(ErrorCode::UnknownQuery, "'" + sql_id + "' is not in workload " + workload_.name);
  }
  return workload_.queries[it->second];
}

double SimEngine::default_latency(const std::string& sql_id) const {
  const SimQuery& q = query(sql_id);
  return q.latency_by_hint.at(q.default_hint_text);
}

ExecutionOutcome SimEngine::execute(const EngineRequest& request) {
  if (request.timeout_ms <= 0) {
    raise(ErrorCode::InvalidConfig, "timeout_ms must be > 0");
  }
  const SimQuery& q = query(request.sql_id);

  std::string key = request.hint ? serialize_hint(*request.hint) : q.default_hint_text;
  const Hint* effective = request.hint ? &*request.hint : &q.default_hint;
  auto it = q.latency_by_hint.find(key);
  if (it == q.latency_by_hint.end()) {
    // Hints outside the table model hints the engine rejects: the default
    // plan runs instead.
    key = q.default_hint_text;
    effective = &q.default_hint;
    it = q.latency_by_hint.find(key);
  }
  double latency = it->second;

  if (workload_.noise > 0) {
    std::uint64_t attempt;
    {
      std::lock_guard lock(attempts_mutex_);
      attempt = attempts_[{request.sql_id, key}]++;
    }
    Rng rng(derive_seed(workload_.seed, "exec",
                        request.sql_id + "\x1f" + key, attempt));
    latency *= 1.0 + rng.uniform(-workload_.noise, workload_.noise);
    if (latency < 0) latency = 0;
  }

  ExecutionOutcome outcome;
  outcome.stats = q.stats;
  outcome.plan = plan_from_hint(*effective, q.stats);
  if (latency >= request.timeout_ms) {
    outcome.timed_out = true;
    outcome.latency_ms = request.timeout_ms;
  } else {
    outcome.latency_ms = latency;
  }
  return outcome;
}

PlanStats SimEngine::collect_stats(const std::string& sql_id) {
  return query(sql_id).stats;
}

std::vector<Hint> SimEngine::enumerate_hint_space(const std::string& sql_id,
                                                  HintMode mode,
                                                  std::size_t max_aliases,
                                                  std::size_t max_hints) const {
  return enumerate_hints(query(sql_id).aliases, mode, max_aliases, max_hints);
}

std::pair<Hint, double> SimEngine::oracle_optimum(const std::string& sql_id,
                                                  HintMode mode) const {
  const SimQuery& q = query(sql_id);
  double default_ms = q.latency_by_hint.at(q.default_hint_text);
  std::optional<std::pair<Hint, double>> best;
  for (const auto& hint : enumerate_hint_space(sql_id, mode)) {
    std::string key = serialize_hint(hint);
    auto it = q.latency_by_hint.find(key);
    double ms = it != q.latency_by_hint.end() ? it->second : default_ms;
    if (!best || ms < best->second) {
      best = {hint, ms};
    }
  }
  if (!best) {
    raise(ErrorCode::UnknownQuery, "'" + sql_id + "' has an empty hint space");
  }
  return *best;
}

// ---------------------------------------------------------------------------
// ReplayEngine
// ---------------------------------------------------------------------------

void ReplayEngine::add_fixture(const std::string& sql_id, const std::string& sql,
                               const std::filesystem::path& document_path) {
  std::ifstream in(document_path);
  if (!in) {
    raise(ErrorCode::Io, "cannot read fixture " + document_path.string());
  }
  std::stringstream buf;
  buf << in.rdbuf();
  fixtures_[sql_id] = Fixture{sql, buf.str()};
  order_.push_back(sql_id);
}

const ReplayEngine::Fixture& ReplayEngine::fixture(const std::string& sql_id) const {
  auto it = fixtures_.find(sql_id);
  if (it == fixtures_.end()) {
    raise(ErrorCode::UnknownQuery, "'" + sql_id + "' has no recorded fixture");
  }
  return it->second;
}

ExecutionOutcome ReplayEngine::execute(const EngineRequest& request) {
  if (request.hint) {
    raise(ErrorCode::AdapterUnavailable,
          "replay adapter cannot execute hinted requests");
  }
  const Fixture& f = fixture(request.sql_id);
  ExecutionOutcome outcome;
  outcome.plan = parse_plan_json(f.document);
  outcome.stats = stats_from_plan(outcome.plan);

  json doc = json::parse(f.document, nullptr, false);
  const json* root = &doc;
  if (root->is_array() && !root->empty()) root = &root->front();
  outcome.latency_ms = root->is_object() ? root->value("Execution Time", 0.0) : 0.0;
  if (outcome.latency_ms >= request.timeout_ms) {
    outcome.timed_out = true;
    outcome.latency_ms = request.timeout_ms;
  }
  return outcome;
}

PlanStats ReplayEngine::collect_stats(const std::string& sql_id) {
  return stats_from_plan(parse_plan_json(fixture(sql_id).document));
}

std::vector<std::pair<std::string, std::string>> ReplayEngine::queries() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& sql_id : order_) {
    out.emplace_back(sql_id, fixtures_.at(sql_id).sql);
  }
  return out;
}

}  // namespace hintloop
