#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hintloop/hint.hpp"

namespace hintloop {

enum class PlanOp {
  SeqScan,
  IndexScan,
  BitmapScan,
  HashJoin,
  MergeJoin,
  NestedLoop,
  Aggregate,
  Sort,
  Other,
};

bool is_scan_op(PlanOp op);
bool is_join_op(PlanOp op);

// One node of a parsed execution plan. Scans carry a relation alias and no
// children; joins carry exactly two children. Attributes the model does not
// understand are kept as strings in `extra`.
struct PlanNode {
  PlanOp op = PlanOp::Other;
  std::string op_name;  // original node-type text
  std::string relation;
  double estimated_rows = 0;
  std::optional<double> actual_rows;
  std::vector<PlanNode> children;
  std::map<std::string, std::string> extra;
};

bool plan_structure_equal(const PlanNode& a, const PlanNode& b);

struct PlanStats {
  std::map<std::string, double> table_cardinalities;
  std::map<std::string, double> filter_selectivities;  // in [0, 1]
};

struct ExecutionOutcome {
  PlanNode plan;
  double latency_ms = 0;
  bool timed_out = false;
  PlanStats stats;
};

// Parses an EXPLAIN (ANALYZE, FORMAT JSON)-shaped document. Accepts the
// full array form, an object with a "Plan" key, or a bare plan node.
PlanNode parse_plan_json(const std::string& document);

// Splices out non-structural unary nodes (Aggregate, Sort, Hash,
// materialization and parallel wrappers) so only scans and joins remain.
// Idempotent; never fails on a valid tree.
PlanNode simplify_plan(const PlanNode& root);

// Deduplicated relation aliases in left-to-right leaf order.
std::vector<std::string> extract_tables(const PlanNode& root);

// Turns a simplified plan tree into a hint. Full-plan mode emits scan and
// join method clauses plus the Leading clause; join-order mode only the
// Leading clause. Leaves whose operator has no hintable scan method
// contribute their alias to the join order without a scan clause.
Hint extract_hint(const PlanNode& root, HintMode mode);

// Cardinalities from leaf estimates; selectivities as actual/estimated rows
// where both are present.
PlanStats stats_from_plan(const PlanNode& root);

// Builds the plan tree a hint pins down. Methods the hint leaves open
// default to sequential scans and hash joins. Used by the simulated engine.
PlanNode plan_from_hint(const Hint& hint, const PlanStats& stats);

}  // namespace hintloop
