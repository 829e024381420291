#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "hintloop/engine.hpp"

namespace hintloop {

struct SftDatasetEntry {
  std::string sql_id;
  std::string prompt_text;  // contains the raw SQL verbatim
  std::string hint_text;    // canonical reference hint h*
  std::string engine;       // provenance
  std::string timestamp;    // provenance, caller-supplied stamp
};

struct SftBuildReport {
  std::vector<SftDatasetEntry> entries;
  std::vector<std::pair<std::string, std::string>> failures;  // sql_id, reason
};

// Fixed prompt template: role line, raw SQL block, then a "Cardinalities:"
// block with one "alias: count" line per table in extract_tables order.
std::string sft_prompt_text(const std::string& sql,
                            const std::vector<std::string>& tables,
                            const PlanStats& stats);

// Per query: execute without a hint, extract tables and cardinalities from
// the plan, build the prompt, and extract the hint label. Timed-out and
// failing queries are skipped and reported. Throws EmptyDataset when every
// query failed.
SftBuildReport build_sft_dataset(
    ExecutionEngine& engine,
    const std::vector<std::pair<std::string, std::string>>& queries,
    HintMode mode, double timeout_ms, const std::string& timestamp);

// JSONL round trip; read validates the schema (including that every hint
// parses) and names the offending line on violations.
void write_dataset(const std::vector<SftDatasetEntry>& entries,
                   const std::filesystem::path& path);
std::vector<SftDatasetEntry> read_dataset(const std::filesystem::path& path);

}  // namespace hintloop
