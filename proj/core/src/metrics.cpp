#include "hintloop/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "hintloop/errors.hpp"

namespace hintloop {

using ordered_json = nlohmann::ordered_json;

static void check_same_queries(const LatencyMap& baseline,
                               const LatencyMap& system) {
  if (baseline.size() != system.size()) {
    raise(ErrorCode::MismatchedQuerySets,
          "baseline has " + std::to_string(baseline.size()) + " queries, system " +
              std::to_string(system.size()));
  }
  for (const auto& [sql_id, ms] : baseline) {
    if (!system.count(sql_id)) {
      raise(ErrorCode::MismatchedQuerySets, "system is missing '" + sql_id + "'");
    }
  }
}

static double baseline_total(const LatencyMap& baseline) {
  double total = 0;
  for (const auto& [sql_id, ms] : baseline) total += ms;
  if (!(total > 0)) {
    raise(ErrorCode::ZeroBaselineTotal, "baseline latencies sum to zero");
  }
  return total;
}

double overall_gain(const LatencyMap& baseline, const LatencyMap& system) {
  check_same_queries(baseline, system);
  double total = baseline_total(baseline);
  double gain = 0;
  for (const auto& [sql_id, t_pg] : baseline) {
    if (!(t_pg > 0)) continue;
    double weight = t_pg / total;
    gain += weight * (t_pg - system.at(sql_id)) / t_pg;
  }
  return gain;
}

std::pair<double, bool> filtered_gain(const LatencyMap& baseline,
                                      const LatencyMap& system) {
  check_same_queries(baseline, system);
  LatencyMap accel_baseline, accel_system;
  for (const auto& [sql_id, t_pg] : baseline) {
    double t = system.at(sql_id);
    if (t < t_pg) {
      accel_baseline[sql_id] = t_pg;
      accel_system[sql_id] = t;
    }
  }
  if (accel_baseline.empty()) return {0.0, true};
  return {overall_gain(accel_baseline, accel_system), false};
}

double ret(const LatencyMap& baseline, const LatencyMap& system) {
  check_same_queries(baseline, system);
  double total = baseline_total(baseline);
  double system_total = 0;
  for (const auto& [sql_id, ms] : system) system_total += ms;
  return system_total / total;
}

double homogeneous_rate(const IterationLog& log) {
  std::size_t generated = 0, homogeneous = 0;
  for (const auto& row : log.rows) {
    if (row.stage != "gen") continue;
    ++generated;
    if (row.error || row.matches_default) ++homogeneous;
  }
  if (generated == 0) return 0.0;
  return static_cast<double>(homogeneous) / static_cast<double>(generated);
}

std::vector<std::pair<double, double>> percentile_table(
    std::vector<double> latencies, const std::vector<double>& quantiles) {
  if (latencies.empty()) {
    raise(ErrorCode::EmptyInput, "percentiles of an empty latency set");
  }
  std::sort(latencies.begin(), latencies.end());
  std::vector<std::pair<double, double>> out;
  const auto n = static_cast<double>(latencies.size());
  for (double q : quantiles) {
    std::size_t rank = static_cast<std::size_t>(std::ceil(q * n));
    if (rank < 1) rank = 1;
    if (rank > latencies.size()) rank = latencies.size();
    out.emplace_back(q, latencies[rank - 1]);
  }
  return out;
}

MetricsSummary summarize(const LatencyMap& baseline, const LatencyMap& system,
                         double hr) {
  MetricsSummary s;
  s.ret = ret(baseline, system);
  s.overall_gain = overall_gain(baseline, system);
  auto [fg, empty] = filtered_gain(baseline, system);
  s.filtered_gain = fg;
  s.filtered_empty = empty;
  s.hr = hr;
  std::vector<double> base_lat, sys_lat;
  for (const auto& [id, ms] : baseline) base_lat.push_back(ms);
  for (const auto& [id, ms] : system) sys_lat.push_back(ms);
  s.baseline_percentiles = percentile_table(base_lat);
  s.system_percentiles = percentile_table(sys_lat);
  return s;
}

LatencyMap baselines_from_logs(const std::vector<IterationLog>& logs) {
  LatencyMap out;
  for (const auto& log : logs) {
    for (const auto& row : log.rows) {
      if (out.count(row.sql_id)) continue;
      if (row.stage == "init") {
        out[row.sql_id] = row.latency_ms;
      } else {
        // Prepared runs log no init row; invert eta = (t_o - t*)/t_o.
        double denom = 1.0 - row.eta;
        out[row.sql_id] =
            denom > 0 ? row.best_latency_ms / denom : row.best_latency_ms;
      }
    }
  }
  return out;
}

LatencyMap final_latencies_from_logs(const std::vector<IterationLog>& logs) {
  LatencyMap out;
  for (const auto& log : logs) {
    for (const auto& row : log.rows) out[row.sql_id] = row.latency_ms;
  }
  return out;
}

LatencyMap best_latencies_from_logs(const std::vector<IterationLog>& logs) {
  LatencyMap out;
  for (const auto& log : logs) {
    for (const auto& row : log.rows) out[row.sql_id] = row.best_latency_ms;
  }
  return out;
}

void write_summary_csv(const std::vector<IterationLog>& logs,
                       const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    raise(ErrorCode::Io, "cannot write " + path.string());
  }
  out << "iteration,workload,total_latency_ms,total_baseline_ms,ret,best_ret,hr\n";
  char buf[256];
  for (const auto& log : logs) {
    std::snprintf(buf, sizeof(buf), "%d,%s,%.6f,%.6f,%.6f,%.6f,%.6f\n",
                  log.iteration, log.workload.c_str(), log.total_latency_ms,
                  log.total_baseline_ms, log.ret, log.best_ret, log.hr);
    out << buf;
  }
}

static ordered_json summary_to_json(const MetricsSummary& s) {
  ordered_json j;
  j["ret"] = s.ret;
  j["overall_gain"] = s.overall_gain;
  j["filtered_gain"] = s.filtered_gain;
  j["filtered_empty"] = s.filtered_empty;
  j["hr"] = s.hr;
  auto percentiles = [](const std::vector<std::pair<double, double>>& table) {
    ordered_json p;
    char key[16];
    for (const auto& [q, v] : table) {
      std::snprintf(key, sizeof(key), "p%g", q * 100);
      p[key] = v;
    }
    return p;
  };
  j["baseline_percentiles"] = percentiles(s.baseline_percentiles);
  j["system_percentiles"] = percentiles(s.system_percentiles);
  return j;
}

void write_report_json(const std::vector<IterationLog>& logs,
                       const std::filesystem::path& path) {
  if (logs.empty()) {
    raise(ErrorCode::EmptyInput, "no iterations to report");
  }
  auto baseline = baselines_from_logs(logs);
  double hr_sum = 0;
  std::size_t hr_count = 0;
  for (const auto& log : logs) {
    bool has_gen = false;
    for (const auto& row : log.rows) has_gen |= row.stage == "gen";
    if (has_gen) {
      hr_sum += log.hr;
      ++hr_count;
    }
  }
  double hr = hr_count ? hr_sum / static_cast<double>(hr_count) : 0.0;

  ordered_json j;
  j["iterations"] = logs.size();
  // Both resolutions of the aggregation ambiguity, labeled.
  j["final_iteration"] =
      summary_to_json(summarize(baseline, final_latencies_from_logs(logs), hr));
  j["best_over_iterations"] =
      summary_to_json(summarize(baseline, best_latencies_from_logs(logs), hr));

  std::ofstream out(path);
  if (!out) {
    raise(ErrorCode::Io, "cannot write " + path.string());
  }
  out << j.dump(2) << "\n";
}

void write_plot_series(const std::vector<IterationLog>& logs,
                       const std::filesystem::path& directory) {
  std::filesystem::create_directories(directory);
  auto write_series = [&](const std::string& name, auto getter) {
    std::ofstream out(directory / (name + ".csv"));
    if (!out) {
      raise(ErrorCode::Io, "cannot write plot series " + name);
    }
    out << "iteration," << name << "\n";
    char buf[64];
    for (const auto& log : logs) {
      std::snprintf(buf, sizeof(buf), "%d,%.6f\n", log.iteration, getter(log));
      out << buf;
    }
  };
  write_series("ret", [](const IterationLog& l) { return l.ret; });
  write_series("best_ret", [](const IterationLog& l) { return l.best_ret; });
  write_series("hr", [](const IterationLog& l) { return l.hr; });
}

}  // namespace hintloop
