#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "hintloop/hint.hpp"
#include "hintloop/plan.hpp"

namespace hintloop {

struct EngineRequest {
  std::string sql_id;
  std::string sql;
  std::optional<Hint> hint;  // absent = engine default plan
  double timeout_ms = 10000;
};

// Seam between the pipeline and whatever runs the queries. The simulated
// engine below covers desk-scale experiments; a live-database adapter
// implements the same two calls (execute, and EXPLAIN-based collect_stats).
class ExecutionEngine {
 public:
  virtual ~ExecutionEngine() = default;
  virtual ExecutionOutcome execute(const EngineRequest& request) = 0;
  virtual PlanStats collect_stats(const std::string& sql_id) = 0;
  virtual std::string name() const = 0;
};

// ---------------------------------------------------------------------------
// Simulated engine
// ---------------------------------------------------------------------------

struct SimQuery {
  std::string sql_id;
  std::string sql;
  std::vector<std::string> aliases;
  std::string default_hint_text;  // canonical; always a key of latency_by_hint
  Hint default_hint;
  std::map<std::string, double> latency_by_hint;  // canonical hint -> ms
  PlanStats stats;
};

// Ground-truth latency tables, authored in JSON or TOML (docs/sim-workload.md).
// Hints outside the table behave like rejected hints: the query runs with the
// default plan at the default latency.
struct SimWorkload {
  std::string name;
  HintMode mode = HintMode::JoinOrder;
  double timeout_ms = 10000;
  double noise = 0;  // multiplicative jitter fraction
  std::uint64_t seed = 1;
  std::vector<SimQuery> queries;
};

SimWorkload load_workload(const std::filesystem::path& path);
void save_workload(const SimWorkload& workload, const std::filesystem::path& path);

class SimEngine : public ExecutionEngine {
 public:
  explicit SimEngine(SimWorkload workload);

  ExecutionOutcome execute(const EngineRequest& request) override;
  PlanStats collect_stats(const std::string& sql_id) override;
  std::string name() const override { return "sim:" + workload_.name; }

  // All canonical hints over the query's alias set.
  std::vector<Hint> enumerate_hint_space(const std::string& sql_id,
                                         HintMode mode,
                                         std::size_t max_aliases = 6,
                                         std::size_t max_hints = 250000) const;

  // The hint with the lowest ground-truth latency over the enumerated space.
  std::pair<Hint, double> oracle_optimum(const std::string& sql_id,
                                         HintMode mode) const;

  const SimWorkload& workload() const { return workload_; }
  const SimQuery& query(const std::string& sql_id) const;
  double default_latency(const std::string& sql_id) const;

 private:
  SimWorkload workload_;
  std::map<std::string, std::size_t> index_;
  std::map<std::pair<std::string, std::string>, std::uint64_t> attempts_;
  std::mutex attempts_mutex_;
};

// ---------------------------------------------------------------------------
// Replay adapter
// ---------------------------------------------------------------------------

// Replays recorded EXPLAIN fixtures as baseline executions. Hinted requests
// cannot be replayed and raise AdapterUnavailable.
class ReplayEngine : public ExecutionEngine {
 public:
  void add_fixture(const std::string& sql_id, const std::string& sql,
                   const std::filesystem::path& document_path);

  ExecutionOutcome execute(const EngineRequest& request) override;
  PlanStats collect_stats(const std::string& sql_id) override;
  std::string name() const override { return "replay"; }

  std::vector<std::pair<std::string, std::string>> queries() const;

 private:
  struct Fixture {
    std::string sql;
    std::string document;
  };
  const Fixture& fixture(const std::string& sql_id) const;
  std::map<std::string, Fixture> fixtures_;
  std::vector<std::string> order_;
};

}  // namespace hintloop
