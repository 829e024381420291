#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hintloop/plan.hpp"
#include "hintloop/record_store.hpp"

namespace hintloop {

// The static system prompt and the section templates are normative external
// interfaces: docs/prompt-template.md documents the exact wording, and the
// rendered text is a pure function of the sections.
extern const std::string kSystemPrompt;
extern const std::string kRegulationsText;

struct PromptReference {
  std::string sql_id;
  std::string sql;
  Hint hint;
  std::string hint_text;
  double latency_ms = 0;
};

struct PromptBestSoFar {
  Hint hint;
  std::string hint_text;
  double gain = 0;  // eta, relative to the initialization baseline
};

// Prompt x = (SP || UP). User sections appear in the fixed order References,
// Statistics, Best so far (absent on a query's first generation iteration),
// Regulations.
struct PromptBundle {
  std::string sql_id;
  std::string sql;
  int iteration = 0;
  std::string system_prompt;
  std::vector<PromptReference> references;
  PlanStats stats;
  std::optional<PromptBestSoFar> best;
  std::string regulations;
  std::string user_rendered;
  std::string rendered;  // system prompt + user prompt
};

// Assembles the bundle; throws SelfReference when a reference carries the
// query's own sql_id.
PromptBundle build_prompt(const std::string& sql_id, const std::string& sql,
                          int iteration,
                          const std::vector<ExecutionRecord>& references,
                          const PlanStats& stats,
                          const std::optional<PromptBestSoFar>& best);

// Performance gain eta = (t_o - t_star) / t_o; negative when the best plan
// is slower than the baseline. Throws ZeroBaseline.
double compute_gain(double baseline_ms, double best_ms);

// Retrieval + feedback assembly against the store: fresh references, the
// live best record and its gain over the stored baseline.
PromptBundle build_prompt_from_store(const RecordStoreApi& store,
                                     const std::string& sql_id,
                                     const std::string& sql, int iteration,
                                     std::size_t k, SimilarityMetric metric,
                                     const PlanStats& stats, bool include_best);

// Cross-iteration prompt update: records the previous iteration's outcome
// (strict best replacement), then rebuilds the bundle with the refreshed
// best record, gain and references.
PromptBundle evolve_prompt(const Hint& previous_hint, double previous_latency_ms,
                           int previous_iteration, RecordStoreApi& store,
                           const std::string& sql_id, const std::string& sql,
                           int iteration, std::size_t k, SimilarityMetric metric,
                           const PlanStats& stats);

std::string format_gain_percent(double gain);

}  // namespace hintloop
