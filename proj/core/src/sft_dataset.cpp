#include "hintloop/sft_dataset.hpp"

#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "hintloop/errors.hpp"

namespace hintloop {

using ordered_json = nlohmann::ordered_json;

std::string sft_prompt_text(const std::string& sql,
                            const std::vector<std::string>& tables,
                            const PlanStats& stats) {
  std::string out =
      "You are a database expert. Generate an execution-plan hint for the "
      "query below.\n\n";
  out += sql + "\n\n";
  out += "Cardinalities:\n";
  char buf[64];
  for (const auto& alias : tables) {
    double rows = 0;
    auto it = stats.table_cardinalities.find(alias);
    if (it != stats.table_cardinalities.end()) rows = it->second;
    std::snprintf(buf, sizeof(buf), "%.0f", rows);
    out += alias + ": " + buf + "\n";
  }
  return out;
}

SftBuildReport build_sft_dataset(
    ExecutionEngine& engine,
    const std::vector<std::pair<std::string, std::string>>& queries,
    HintMode mode, double timeout_ms, const std::string& timestamp) {
  SftBuildReport report;
  for (const auto& [sql_id, sql] : queries) {
    try {
      EngineRequest request{sql_id, sql, std::nullopt, timeout_ms};
      ExecutionOutcome outcome = engine.execute(request);
      if (outcome.timed_out) {
        report.failures.emplace_back(sql_id, "timed out; plan incomplete");
        continue;
      }
      PlanNode simplified = simplify_plan(outcome.plan);
      auto tables = extract_tables(simplified);
      Hint hint = extract_hint(simplified, mode);

      SftDatasetEntry entry;
      entry.sql_id = sql_id;
      entry.prompt_text = sft_prompt_text(sql, tables, outcome.stats);
      entry.hint_text = serialize_hint(hint);
      entry.engine = engine.name();
      entry.timestamp = timestamp;
      report.entries.push_back(std::move(entry));
    } catch (const Error& e) {
      report.failures.emplace_back(sql_id, e.what());
    }
  }
  if (report.entries.empty() && !queries.empty()) {
    raise(ErrorCode::EmptyDataset, "every query failed during dataset build");
  }
  return report;
}

void write_dataset(const std::vector<SftDatasetEntry>& entries,
                   const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    raise(ErrorCode::Io, "cannot write " + path.string());
  }
  for (const auto& e : entries) {
    ordered_json j;
    j["sql_id"] = e.sql_id;
    j["prompt"] = e.prompt_text;
    j["hint"] = e.hint_text;
    j["engine"] = e.engine;
    j["timestamp"] = e.timestamp;
    out << j.dump() << "\n";
  }
}

std::vector<SftDatasetEntry> read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    raise(ErrorCode::Io, "cannot read " + path.string());
  }
  std::vector<SftDatasetEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      raise(ErrorCode::SchemaViolation,
            "line " + std::to_string(line_no) + " is not JSON");
    }
    for (const char* key : {"sql_id", "prompt", "hint", "engine", "timestamp"}) {
      if (!j.contains(key) || !j[key].is_string()) {
        raise(ErrorCode::SchemaViolation,
              "line " + std::to_string(line_no) + " missing string field '" +
                  key + "'");
      }
    }
    SftDatasetEntry e;
    e.sql_id = j["sql_id"].get<std::string>();
    e.prompt_text = j["prompt"].get<std::string>();
    e.hint_text = j["hint"].get<std::string>();
    e.engine = j["engine"].get<std::string>();
    e.timestamp = j["timestamp"].get<std::string>();
    auto parsed = parse_hint(e.hint_text);
    if (is_error(parsed)) {
      raise(ErrorCode::SchemaViolation,
            "line " + std::to_string(line_no) + " hint does not parse: " +
                get_error(parsed).detail);
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

}  // namespace hintloop
