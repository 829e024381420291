#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "hintloop/iteration_log.hpp"

namespace hintloop {

// Per-query latency maps keyed by sql_id; baseline is the engine's default
// plan, system is the pipeline under evaluation.
using LatencyMap = std::map<std::string, double>;

// Weighted relative speedup over all queries, with weights t_pg,i / sum(t_pg).
// Algebraically equals 1 - ret(...). Throws MismatchedQuerySets and
// ZeroBaselineTotal.
double overall_gain(const LatencyMap& baseline, const LatencyMap& system);

// Same weighted formula restricted to accelerated queries (t_i < t_pg,i).
// The flag is true when no query was accelerated (gain reported as 0).
std::pair<double, bool> filtered_gain(const LatencyMap& baseline,
                                      const LatencyMap& system);

// Relative execution time: sum(t_i) / sum(t_pg,i).
double ret(const LatencyMap& baseline, const LatencyMap& system);

// Fraction of generated hints that were invalid or pinned the engine's
// default plan. Initialization-only iterations report 0.
double homogeneous_rate(const IterationLog& log);

// Nearest-rank quantiles (no interpolation), order-independent.
std::vector<std::pair<double, double>> percentile_table(
    std::vector<double> latencies,
    const std::vector<double>& quantiles = {0.5, 0.75, 0.9, 0.95, 0.99});

struct MetricsSummary {
  double ret = 0;
  double hr = 0;  // mean over generation iterations
  double overall_gain = 0;
  double filtered_gain = 0;
  bool filtered_empty = false;
  std::vector<std::pair<double, double>> baseline_percentiles;
  std::vector<std::pair<double, double>> system_percentiles;
};

MetricsSummary summarize(const LatencyMap& baseline, const LatencyMap& system,
                         double hr);

// Latency maps out of a run log: per-query baselines, final-iteration
// latencies and best-over-iterations latencies.
LatencyMap baselines_from_logs(const std::vector<IterationLog>& logs);
LatencyMap final_latencies_from_logs(const std::vector<IterationLog>& logs);
LatencyMap best_latencies_from_logs(const std::vector<IterationLog>& logs);

// CSV with one row per iteration (iteration, workload, totals, ret, best_ret, hr).
void write_summary_csv(const std::vector<IterationLog>& logs,
                       const std::filesystem::path& path);

// JSON report carrying both "final" and "best" variants of the summary,
// labeled; see docs/config.md.
void write_report_json(const std::vector<IterationLog>& logs,
                       const std::filesystem::path& path);

// x/y series files for external plotting: iteration vs ret/best_ret/hr.
void write_plot_series(const std::vector<IterationLog>& logs,
                       const std::filesystem::path& directory);

}  // namespace hintloop
