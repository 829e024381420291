#include "hintloop/iteration_log.hpp"

#include <fstream>

#include "hintloop/errors.hpp"

namespace hintloop {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

ordered_json to_json(const IterationLog& log) {
  ordered_json j;
  j["iteration"] = log.iteration;
  j["workload"] = log.workload;
  j["rows"] = ordered_json::array();
  for (const auto& row : log.rows) {
    ordered_json r;
    r["sql_id"] = row.sql_id;
    r["stage"] = row.stage;
    if (row.hint_text) {
      r["hint"] = *row.hint_text;
    } else {
      r["hint"] = nullptr;
    }
    if (row.error) {
      r["error"] = *row.error;
    } else {
      r["error"] = nullptr;
    }
    r["latency_ms"] = row.latency_ms;
    r["timed_out"] = row.timed_out;
    r["replaced"] = row.replaced;
    r["matches_default"] = row.matches_default;
    r["eta"] = row.eta;
    r["best_latency_ms"] = row.best_latency_ms;
    j["rows"].push_back(std::move(r));
  }
  ordered_json totals;
  totals["latency_ms"] = log.total_latency_ms;
  totals["baseline_ms"] = log.total_baseline_ms;
  totals["ret"] = log.ret;
  totals["best_ret"] = log.best_ret;
  totals["hr"] = log.hr;
  j["totals"] = std::move(totals);
  return j;
}

IterationLog iteration_log_from_json(const json& j) {
  IterationLog log;
  log.iteration = j.at("iteration").get<int>();
  log.workload = j.value("workload", "");
  for (const auto& r : j.at("rows")) {
    QueryRow row;
    row.sql_id = r.at("sql_id").get<std::string>();
    row.stage = r.value("stage", "gen");
    if (r.contains("hint") && !r["hint"].is_null()) {
      row.hint_text = r["hint"].get<std::string>();
    }
    if (r.contains("error") && !r["error"].is_null()) {
      row.error = r["error"].get<std::string>();
    }
    row.latency_ms = r.value("latency_ms", 0.0);
    row.timed_out = r.value("timed_out", false);
    row.replaced = r.value("replaced", false);
    row.matches_default = r.value("matches_default", false);
    row.eta = r.value("eta", 0.0);
    row.best_latency_ms = r.value("best_latency_ms", 0.0);
    log.rows.push_back(std::move(row));
  }
  const auto& totals = j.at("totals");
  log.total_latency_ms = totals.value("latency_ms", 0.0);
  log.total_baseline_ms = totals.value("baseline_ms", 0.0);
  log.ret = totals.value("ret", 0.0);
  log.best_ret = totals.value("best_ret", 0.0);
  log.hr = totals.value("hr", 0.0);
  return log;
}

void write_run_log_jsonl(const std::vector<IterationLog>& logs,
                         const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    raise(ErrorCode::Io, "cannot write " + path.string());
  }
  for (const auto& log : logs) {
    out << to_json(log).dump() << "\n";
  }
}

std::vector<IterationLog> read_run_log_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    raise(ErrorCode::Io, "cannot read " + path.string());
  }
  std::vector<IterationLog> logs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto j = json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      raise(ErrorCode::SchemaViolation,
            "run log line " + std::to_string(line_no) + " is not JSON");
    }
    try {
      logs.push_back(iteration_log_from_json(j));
    } catch (const json::exception& e) {
      raise(ErrorCode::SchemaViolation,
            "run log line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return logs;
}

}  // namespace hintloop
