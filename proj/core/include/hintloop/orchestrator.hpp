#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hintloop/engine.hpp"
#include "hintloop/generator.hpp"
#include "hintloop/iteration_log.hpp"
#include "hintloop/record_store.hpp"

namespace hintloop {

struct WorkloadRef {
  std::string name;
  std::filesystem::path file;
  std::optional<double> timeout_ms;  // overrides the workload file default
};

struct EpisodeConfig {
  std::size_t count = 1;
  std::optional<std::uint64_t> seed;  // defaults to the run seed
};

struct RunConfig {
  std::vector<WorkloadRef> workloads;
  int iterations = 50;
  std::optional<EpisodeConfig> episodes;  // dynamic scenario when present
  std::size_t k = 1;
  SimilarityMetric metric = SimilarityMetric::Cosine;
  HintMode mode = HintMode::JoinOrder;
  GeneratorSpec generator;
  std::uint64_t seed = 1;
  bool prepare = false;  // bootstrap the store with hint-less executions
  std::optional<std::filesystem::path> journal;  // relative to the output dir
};

// Parses the TOML run config (docs/config.md); file paths resolve relative
// to the config file's directory.
RunConfig run_config_from_toml(const std::filesystem::path& path);

struct EpisodeSpan {
  std::string workload;
  int first_iteration = 1;
  int last_iteration = 1;
};

// Random partition of [1..total] into `episode_count` spans of >= 1
// iteration, each assigned a uniformly chosen workload. Deterministic under
// the seed; throws InfeasiblePartition.
std::vector<EpisodeSpan> schedule_episodes(const std::vector<std::string>& names,
                                           std::size_t episode_count,
                                           int total_iterations,
                                           std::uint64_t seed);

// Preparation stage: executes the seed queries hint-less and loads their
// iteration-0 records. Per-query failures are collected, not fatal.
struct PrepareReport {
  std::size_t loaded = 0;
  std::vector<std::pair<std::string, std::string>> failures;
};
PrepareReport prepare(RecordStoreApi& store, ExecutionEngine& engine,
                      const std::vector<std::pair<std::string, std::string>>& seed_queries,
                      HintMode mode, double timeout_ms);

// Drives Preparation / Initialization / Generation across iterations.
class Orchestrator {
 public:
  Orchestrator(RunConfig config, std::optional<std::filesystem::path> out_dir);

  std::vector<IterationLog> run();

  // Runs deterministically up to (sql_id, iteration) and returns the exact
  // prompt bundle the generator would see there.
  std::string preview_prompt(const std::string& sql_id, int iteration);

  RecordStore& store() { return store_; }

 private:
  struct QueryState {
    Hint default_hint;
    bool default_known = false;
    int generation_count = 0;
  };

  std::vector<IterationLog> run_internal(const std::string* capture_sql_id,
                                         int capture_iteration,
                                         std::string* captured);
  SimEngine& engine_for(const std::string& workload_name);

  RunConfig config_;
  RecordStore store_;
  HintGenerator generator_;
  std::map<std::string, std::unique_ptr<SimEngine>> engines_;
  std::map<std::string, double> timeouts_;
  std::vector<std::string> workload_order_;
  std::map<std::string, QueryState> query_state_;
};

}  // namespace hintloop
