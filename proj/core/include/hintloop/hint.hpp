#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace hintloop {

// ---------------------------------------------------------------------------
// Join-order trees
// ---------------------------------------------------------------------------

// Binary tree over table aliases, the payload of a Leading clause. Nodes are
// immutable and shared; edits build new trees.
struct JoinTreeNode;
using JoinTreeRef = std::shared_ptr<const JoinTreeNode>;

struct JoinTreeNode {
  std::string alias;  // set iff leaf
  JoinTreeRef left;
  JoinTreeRef right;

  bool is_leaf() const { return !left; }
};

JoinTreeRef make_leaf(std::string alias);
JoinTreeRef make_join(JoinTreeRef left, JoinTreeRef right);

// Leaf aliases in left-to-right order.
std::vector<std::string> leaf_aliases(const JoinTreeRef& tree);
std::size_t leaf_count(const JoinTreeRef& tree);
bool join_tree_equal(const JoinTreeRef& a, const JoinTreeRef& b);

// Renders the tree body: leaf -> "a" wrapped at the root as "(a)", internal
// -> "(left right)".
std::string render_join_tree(const JoinTreeRef& tree);

// Sorted leaf-alias sets of every internal node, one entry per join. Used for
// structural distance between plans.
std::vector<std::vector<std::string>> subtree_alias_sets(const JoinTreeRef& tree);

// ---------------------------------------------------------------------------
// Hints
// ---------------------------------------------------------------------------

enum class HintMode { JoinOrder, FullPlan };

enum class ScanMethod { SeqScan, IndexScan, BitmapScan };
enum class JoinMethod { HashJoin, MergeJoin, NestedLoop };

std::string_view to_string(ScanMethod m);
std::string_view to_string(JoinMethod m);
std::string_view to_string(HintMode m);
HintMode hint_mode_from_string(std::string_view s);

struct ScanClause {
  ScanMethod method;
  std::string alias;
};

struct JoinClause {
  JoinMethod method;
  std::vector<std::string> aliases;  // leaf order of the matching subtree
};

// A parsed plan hint. In JoinOrder mode only `leading` is populated; in
// FullPlan mode scan and join clauses carry the per-table and per-join
// methods. Invariants (enforced by parse_hint and the constructors used by
// extraction): every clause alias occurs in `leading`, and every join
// clause's alias set equals the leaf set of some `leading` subtree.
struct Hint {
  HintMode mode = HintMode::JoinOrder;
  std::vector<ScanClause> scans;
  std::vector<JoinClause> joins;
  JoinTreeRef leading;
};

bool operator==(const Hint& a, const Hint& b);

// Canonical text: scan clauses in leading-leaf order, join clauses in
// post-order of the leading tree, then the Leading clause. Grammar and
// canonicalization rules are documented in docs/hint-grammar.md.
std::string serialize_hint(const Hint& hint);

enum class HintErrorKind {
  BracketMismatch,
  RepeatedChunk,
  UnknownAlias,
  UnknownMethod,
  DuplicateAlias,
  Truncated,
};

std::string_view to_string(HintErrorKind kind);

struct HintValidationError {
  HintErrorKind kind;
  std::size_t position = 0;  // character offset into the original input
  std::string detail;
};

using HintOrError = std::variant<Hint, HintValidationError>;

inline bool is_error(const HintOrError& r) {
  return std::holds_alternative<HintValidationError>(r);
}
inline const Hint& get_hint(const HintOrError& r) { return std::get<Hint>(r); }
inline const HintValidationError& get_error(const HintOrError& r) {
  return std::get<HintValidationError>(r);
}

// Strict parse of hint text into canonical form. `known_aliases` lists the
// tables of the query, with multiplicity; when empty, alias identity checks
// are skipped and every alias has multiplicity one.
HintOrError parse_hint(std::string_view text,
                       const std::vector<std::string>& known_aliases = {});

// Validation pass over raw generator output: examines at most `budget`
// characters, strips prose around the first hint-like span, then parses.
HintOrError normalize_generated_text(std::string_view text,
                                     const std::vector<std::string>& known_aliases,
                                     std::size_t budget = 4096);

// True when the hint pins the same plan the engine would pick by default.
// If either side is join-order only, the comparison is on Leading trees.
bool hint_equals_default(const Hint& hint, const Hint& default_plan_hint);

// Linear join order for engines without tree-shaped hints: left-to-right
// leaves of the Leading clause.
std::vector<std::string> translate_to_join_sequence(const Hint& hint);

// ---------------------------------------------------------------------------
// Hint-space enumeration
// ---------------------------------------------------------------------------

// Count of canonical hints over `n` aliases: n! * Catalan(n-1) join trees,
// times method assignments in FullPlan mode. Saturates at SIZE_MAX.
std::size_t hint_space_size(std::size_t n_aliases, HintMode mode);

// All canonical hints over the alias set. Throws SpaceTooLarge when the alias
// count exceeds `max_aliases` or the space would exceed `max_hints`.
std::vector<Hint> enumerate_hints(const std::vector<std::string>& aliases,
                                  HintMode mode, std::size_t max_aliases = 6,
                                  std::size_t max_hints = 250000);

}  // namespace hintloop
