#include "hintloop/plan.hpp"

#include <algorithm>
#include <set>

#include <nlohmann/json.hpp>

#include "hintloop/errors.hpp"

namespace hintloop {

using nlohmann::json;

bool is_scan_op(PlanOp op) {
  return op == PlanOp::SeqScan || op == PlanOp::IndexScan ||
         op == PlanOp::BitmapScan;
}

bool is_join_op(PlanOp op) {
  return op == PlanOp::HashJoin || op == PlanOp::MergeJoin ||
         op == PlanOp::NestedLoop;
}

bool plan_structure_equal(const PlanNode& a, const PlanNode& b) {
  if (a.op != b.op || a.op_name != b.op_name || a.relation != b.relation ||
      a.children.size() != b.children.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!plan_structure_equal(a.children[i], b.children[i])) return false;
  }
  return true;
}

namespace {

PlanOp op_from_node_type(const std::string& type) {
  if (type == "Seq Scan") return PlanOp::SeqScan;
  if (type == "Index Scan" || type == "Index Only Scan") return PlanOp::IndexScan;
  if (type == "Bitmap Heap Scan") return PlanOp::BitmapScan;
  if (type == "Hash Join") return PlanOp::HashJoin;
  if (type == "Merge Join") return PlanOp::MergeJoin;
  if (type == "Nested Loop") return PlanOp::NestedLoop;
  if (type == "Aggregate") return PlanOp::Aggregate;
  if (type == "Sort") return PlanOp::Sort;
  return PlanOp::Other;
}

std::string scalar_to_string(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

PlanNode parse_node(const json& node) {
  if (!node.is_object()) {
    raise(ErrorCode::MissingField, "plan node is not a JSON object");
  }
  if (!node.contains("Node Type")) {
    raise(ErrorCode::MissingField, "plan node has no \"Node Type\"");
  }
  PlanNode out;
  out.op_name = node.at("Node Type").get<std::string>();
  out.op = op_from_node_type(out.op_name);
  if (node.contains("Alias")) {
    out.relation = node.at("Alias").get<std::string>();
  } else if (node.contains("Relation Name")) {
    out.relation = node.at("Relation Name").get<std::string>();
  }
  if (node.contains("Plan Rows")) {
    out.estimated_rows = node.at("Plan Rows").get<double>();
  }
  if (node.contains("Actual Rows")) {
    out.actual_rows = node.at("Actual Rows").get<double>();
  }
  for (auto it = node.begin(); it != node.end(); ++it) {
    const std::string& key = it.key();
    if (key == "Node Type" || key == "Alias" || key == "Relation Name" ||
        key == "Plan Rows" || key == "Actual Rows" || key == "Plans") {
      continue;
    }
    out.extra[key] = scalar_to_string(it.value());
  }
  if (out.op_name == "Gather" || out.op_name == "Gather Merge") {
    out.extra["Parallel"] = "true";
  }

  if (node.contains("Plans")) {
    for (const auto& child : node.at("Plans")) {
      out.children.push_back(parse_node(child));
    }
  }

  if (out.op == PlanOp::BitmapScan && !out.children.empty()) {
    // The bitmap index machinery below a Bitmap Heap Scan is access detail,
    // not a relation; fold it into extra so the node stays a leaf.
    std::string names;
    for (const auto& child : out.children) {
      if (!names.empty()) names += ", ";
      names += child.op_name;
      auto idx = child.extra.find("Index Name");
      if (idx != child.extra.end()) names += " " + idx->second;
    }
    out.extra["Bitmap Index"] = names;
    out.children.clear();
  }

  if (is_scan_op(out.op)) {
    if (out.relation.empty()) {
      raise(ErrorCode::MissingField,
            out.op_name + " node has no relation alias");
    }
    if (!out.children.empty()) {
      raise(ErrorCode::UnsupportedShape,
            out.op_name + " node has " + std::to_string(out.children.size()) +
                " children, expected 0");
    }
  }
  if (is_join_op(out.op) && out.children.size() != 2) {
    raise(ErrorCode::UnsupportedShape,
          out.op_name + " node has " + std::to_string(out.children.size()) +
              " children, expected 2");
  }
  return out;
}

}  // namespace

PlanNode parse_plan_json(const std::string& document) {
  json doc = json::parse(document, nullptr, false);
  if (doc.is_discarded()) {
    raise(ErrorCode::MalformedDocument, "document is not valid JSON");
  }
  const json* root = &doc;
  if (root->is_array()) {
    if (root->empty()) {
      raise(ErrorCode::MalformedDocument, "document is an empty array");
    }
    root = &root->front();
  }
  if (root->is_object() && root->contains("Plan")) {
    root = &root->at("Plan");
  }
  return parse_node(*root);
}

PlanNode simplify_plan(const PlanNode& root) {
  PlanNode out = root;
  out.children.clear();
  for (const auto& child : root.children) {
    out.children.push_back(simplify_plan(child));
  }
  if (!is_scan_op(out.op) && !is_join_op(out.op) && out.children.size() == 1) {
    return out.children.front();
  }
  return out;
}

static void collect_tables(const PlanNode& node, std::vector<std::string>& out,
                           std::set<std::string>& seen) {
  if (node.children.empty()) {
    if (!node.relation.empty() && seen.insert(node.relation).second) {
      out.push_back(node.relation);
    }
    return;
  }
  for (const auto& child : node.children) collect_tables(child, out, seen);
}

std::vector<std::string> extract_tables(const PlanNode& root) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  collect_tables(root, out, seen);
  return out;
}

namespace {

std::optional<ScanMethod> scan_method_for(PlanOp op) {
  switch (op) {
    case PlanOp::SeqScan: return ScanMethod::SeqScan;
    case PlanOp::IndexScan: return ScanMethod::IndexScan;
    case PlanOp::BitmapScan: return ScanMethod::BitmapScan;
    default: return std::nullopt;
  }
}

JoinMethod join_method_for(PlanOp op) {
  switch (op) {
    case PlanOp::MergeJoin: return JoinMethod::MergeJoin;
    case PlanOp::NestedLoop: return JoinMethod::NestedLoop;
    default: return JoinMethod::HashJoin;
  }
}

JoinTreeRef extract_node(const PlanNode& node, Hint& hint) {
  if (node.children.empty()) {
    if (node.relation.empty()) {
      raise(ErrorCode::NotAJoinTree,
            "leaf node '" + node.op_name + "' has no relation alias");
    }
    if (auto method = scan_method_for(node.op)) {
      hint.scans.push_back({*method, node.relation});
    }
    return make_leaf(node.relation);
  }
  if (node.children.size() != 2 || !is_join_op(node.op)) {
    raise(ErrorCode::NotAJoinTree,
          "node '" + node.op_name + "' with " +
              std::to_string(node.children.size()) +
              " children is not part of a join tree");
  }
  JoinTreeRef left = extract_node(node.children[0], hint);
  JoinTreeRef right = extract_node(node.children[1], hint);
  JoinTreeRef tree = make_join(std::move(left), std::move(right));
  hint.joins.push_back({join_method_for(node.op), leaf_aliases(tree)});
  return tree;
}

}  // namespace

Hint extract_hint(const PlanNode& root, HintMode mode) {
  Hint hint;
  hint.mode = HintMode::FullPlan;
  hint.leading = extract_node(root, hint);
  if (mode == HintMode::JoinOrder) {
    hint.scans.clear();
    hint.joins.clear();
    hint.mode = HintMode::JoinOrder;
  } else if (hint.scans.empty() && hint.joins.empty()) {
    hint.mode = HintMode::JoinOrder;
  }
  return hint;
}

static void collect_stats(const PlanNode& node, PlanStats& stats) {
  if (node.children.empty()) {
    if (!node.relation.empty()) {
      stats.table_cardinalities[node.relation] = node.estimated_rows;
      if (node.actual_rows && node.estimated_rows > 0) {
        double sel = *node.actual_rows / node.estimated_rows;
        stats.filter_selectivities[node.relation] =
            std::clamp(sel, 0.0, 1.0);
      }
    }
    return;
  }
  for (const auto& child : node.children) collect_stats(child, stats);
}

PlanStats stats_from_plan(const PlanNode& root) {
  PlanStats stats;
  collect_stats(root, stats);
  return stats;
}

namespace {

PlanOp op_for_scan_method(ScanMethod m) {
  switch (m) {
    case ScanMethod::SeqScan: return PlanOp::SeqScan;
    case ScanMethod::IndexScan: return PlanOp::IndexScan;
    case ScanMethod::BitmapScan: return PlanOp::BitmapScan;
  }
  return PlanOp::SeqScan;
}

PlanOp op_for_join_method(JoinMethod m) {
  switch (m) {
    case JoinMethod::HashJoin: return PlanOp::HashJoin;
    case JoinMethod::MergeJoin: return PlanOp::MergeJoin;
    case JoinMethod::NestedLoop: return PlanOp::NestedLoop;
  }
  return PlanOp::HashJoin;
}

std::string display_name(PlanOp op) {
  switch (op) {
    case PlanOp::SeqScan: return "Seq Scan";
    case PlanOp::IndexScan: return "Index Scan";
    case PlanOp::BitmapScan: return "Bitmap Heap Scan";
    case PlanOp::HashJoin: return "Hash Join";
    case PlanOp::MergeJoin: return "Merge Join";
    case PlanOp::NestedLoop: return "Nested Loop";
    case PlanOp::Aggregate: return "Aggregate";
    case PlanOp::Sort: return "Sort";
    case PlanOp::Other: return "Other";
  }
  return "Other";
}

PlanNode synth_node(const JoinTreeRef& tree, const Hint& hint,
                    const PlanStats& stats) {
  PlanNode node;
  if (tree->is_leaf()) {
    node.op = PlanOp::SeqScan;
    for (const auto& s : hint.scans) {
      if (s.alias == tree->alias) {
        node.op = op_for_scan_method(s.method);
        break;
      }
    }
    node.op_name = display_name(node.op);
    node.relation = tree->alias;
    auto it = stats.table_cardinalities.find(tree->alias);
    node.estimated_rows = it != stats.table_cardinalities.end() ? it->second : 1000;
    node.actual_rows = node.estimated_rows;
    return node;
  }
  node.children.push_back(synth_node(tree->left, hint, stats));
  node.children.push_back(synth_node(tree->right, hint, stats));

  node.op = PlanOp::HashJoin;
  std::vector<std::string> key = leaf_aliases(tree);
  std::sort(key.begin(), key.end());
  for (const auto& j : hint.joins) {
    std::vector<std::string> set = j.aliases;
    std::sort(set.begin(), set.end());
    if (set == key) {
      node.op = op_for_join_method(j.method);
      break;
    }
  }
  node.op_name = display_name(node.op);
  node.estimated_rows = std::max(node.children[0].estimated_rows,
                                 node.children[1].estimated_rows);
  node.actual_rows = node.estimated_rows;
  return node;
}

}  // namespace

PlanNode plan_from_hint(const Hint& hint, const PlanStats& stats) {
  if (!hint.leading) {
    raise(ErrorCode::NotAJoinTree, "hint has no join order to build a plan from");
  }
  return synth_node(hint.leading, hint, stats);
}

}  // namespace hintloop
