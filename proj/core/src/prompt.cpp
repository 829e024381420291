#include "hintloop/prompt.hpp"

#include <cstdio>

#include "hintloop/errors.hpp"

namespace hintloop {

const std::string kSystemPrompt =
    "You are a database expert. Given a SQL query and its statistics, reply "
    "with exactly one execution-plan hint and nothing else.";

const std::string kRegulationsText =
    "- Generate a hint that improves on the plans above.\n"
    "- Do not copy the referenced plans or the engine's default plan.\n"
    "- Reply with exactly one hint in the canonical hint grammar.";

static std::string fmt(const char* spec, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, value);
  return buf;
}

std::string format_gain_percent(double gain) {
  std::string out = fmt("%.2f", gain * 100.0) + "%";
  if (gain < 0) out += " (worse than baseline)";
  return out;
}

static std::string render_user(const PromptBundle& bundle) {
  std::string up;
  up += "Query: " + bundle.sql_id + "\n";
  up += bundle.sql + "\n";
  if (!bundle.references.empty()) {
    up += "\n## References\n";
    for (const auto& ref : bundle.references) {
      up += "- sql: " + ref.sql + "\n";
      up += "  hint: " + ref.hint_text + "\n";
      up += "  latency_ms: " + fmt("%.3f", ref.latency_ms) + "\n";
    }
  }
  up += "\n## Statistics\n";
  for (const auto& [alias, rows] : bundle.stats.table_cardinalities) {
    up += "cardinality " + alias + ": " + fmt("%.0f", rows) + "\n";
  }
  for (const auto& [alias, sel] : bundle.stats.filter_selectivities) {
    up += "selectivity " + alias + ": " + fmt("%.4f", sel) + "\n";
  }
  if (bundle.best) {
    up += "\n## Best so far\n";
    up += "hint: " + bundle.best->hint_text + "\n";
    up += "gain: " + format_gain_percent(bundle.best->gain) + "\n";
  }
  up += "\n## Regulations\n";
  up += bundle.regulations + "\n";
  return up;
}

PromptBundle build_prompt(const std::string& sql_id, const std::string& sql,
                          int iteration,
                          const std::vector<ExecutionRecord>& references,
                          const PlanStats& stats,
                          const std::optional<PromptBestSoFar>& best) {
  PromptBundle bundle;
  bundle.sql_id = sql_id;
  bundle.sql = sql;
  bundle.iteration = iteration;
  bundle.system_prompt = kSystemPrompt;
  bundle.stats = stats;
  bundle.best = best;
  bundle.regulations = kRegulationsText;
  for (const auto& rec : references) {
    if (rec.sql_id == sql_id) {
      raise(ErrorCode::SelfReference,
            "reference list contains the query's own record '" + sql_id + "'");
    }
    bundle.references.push_back(
        {rec.sql_id, rec.sql, rec.plan, rec.plan_text, rec.execution_time_ms});
  }
  bundle.user_rendered = render_user(bundle);
  bundle.rendered = bundle.system_prompt + "\n\n" + bundle.user_rendered;
  return bundle;
}

double compute_gain(double baseline_ms, double best_ms) {
  if (!(baseline_ms > 0)) {
    raise(ErrorCode::ZeroBaseline, "baseline latency must be > 0");
  }
  return (baseline_ms - best_ms) / baseline_ms;
}

PromptBundle build_prompt_from_store(const RecordStoreApi& store,
                                     const std::string& sql_id,
                                     const std::string& sql, int iteration,
                                     std::size_t k, SimilarityMetric metric,
                                     const PlanStats& stats, bool include_best) {
  std::optional<PromptBestSoFar> best;
  if (include_best) {
    double baseline_ms = store.get_baseline(sql_id).execution_time_ms;
    auto best_rec = store.best_record(sql_id);
    if (best_rec) {
      best = PromptBestSoFar{best_rec->plan, best_rec->plan_text,
                             compute_gain(baseline_ms, best_rec->execution_time_ms)};
    }
  }
  auto refs = store.retrieve_references(sql, sql_id, k, metric);
  return build_prompt(sql_id, sql, iteration, refs, stats, best);
}

PromptBundle evolve_prompt(const Hint& previous_hint, double previous_latency_ms,
                           int previous_iteration, RecordStoreApi& store,
                           const std::string& sql_id, const std::string& sql,
                           int iteration, std::size_t k, SimilarityMetric metric,
                           const PlanStats& stats) {
  store.record_outcome(sql_id, sql, previous_iteration, previous_hint,
                       previous_latency_ms);
  store.get_baseline(sql_id);  // MissingBaseline when initialization never ran
  return build_prompt_from_store(store, sql_id, sql, iteration, k, metric, stats,
                                 /*include_best=*/true);
}

}  // namespace hintloop
