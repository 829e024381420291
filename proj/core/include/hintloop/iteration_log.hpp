#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace hintloop {

// One query's row in one pipeline iteration.
struct QueryRow {
  std::string sql_id;
  std::string stage;  // "init" or "gen"
  std::optional<std::string> hint_text;
  std::optional<std::string> error;  // validation/transport error kind
  double latency_ms = 0;             // executed latency this iteration
  bool timed_out = false;
  bool replaced = false;             // new historical best recorded
  bool matches_default = false;      // generated hint pins the default plan
  double eta = 0;                    // gain of the best record over baseline
  double best_latency_ms = 0;
};

struct IterationLog {
  int iteration = 0;
  std::string workload;
  std::vector<QueryRow> rows;
  // Aggregates, recomputable from the rows.
  double total_latency_ms = 0;
  double total_baseline_ms = 0;
  double ret = 0;       // executed latencies vs baselines
  double best_ret = 0;  // best-so-far latencies vs baselines
  double hr = 0;        // invalid or default-copy generations / generations
};

nlohmann::ordered_json to_json(const IterationLog& log);
IterationLog iteration_log_from_json(const nlohmann::json& j);

void write_run_log_jsonl(const std::vector<IterationLog>& logs,
                         const std::filesystem::path& path);
std::vector<IterationLog> read_run_log_jsonl(const std::filesystem::path& path);

}  // namespace hintloop
