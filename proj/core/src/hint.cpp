#include "hintloop/hint.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <span>

#include "hintloop/errors.hpp"

namespace hintloop {

// ---------------------------------------------------------------------------
// Join trees
// ---------------------------------------------------------------------------

JoinTreeRef make_leaf(std::string alias) {
  auto node = std::make_shared<JoinTreeNode>();
  node->alias = std::move(alias);
  return node;
}

JoinTreeRef make_join(JoinTreeRef left, JoinTreeRef right) {
  auto node = std::make_shared<JoinTreeNode>();
  node->left = std::move(left);
  node->right = std::move(right);
  return node;
}

static void collect_leaves(const JoinTreeRef& t, std::vector<std::string>& out) {
  if (!t) return;
  if (t->is_leaf()) {
    out.push_back(t->alias);
    return;
  }
  collect_leaves(t->left, out);
  collect_leaves(t->right, out);
}

std::vector<std::string> leaf_aliases(const JoinTreeRef& tree) {
  std::vector<std::string> out;
  collect_leaves(tree, out);
  return out;
}

std::size_t leaf_count(const JoinTreeRef& tree) {
  if (!tree) return 0;
  if (tree->is_leaf()) return 1;
  return leaf_count(tree->left) + leaf_count(tree->right);
}

bool join_tree_equal(const JoinTreeRef& a, const JoinTreeRef& b) {
  if (!a || !b) return !a && !b;
  if (a->is_leaf() != b->is_leaf()) return false;
  if (a->is_leaf()) return a->alias == b->alias;
  return join_tree_equal(a->left, b->left) && join_tree_equal(a->right, b->right);
}

static void render_body(const JoinTreeRef& t, std::string& out) {
  if (t->is_leaf()) {
    out += t->alias;
    return;
  }
  out += '(';
  render_body(t->left, out);
  out += ' ';
  render_body(t->right, out);
  out += ')';
}

std::string render_join_tree(const JoinTreeRef& tree) {
  if (!tree) return "";
  std::string out;
  if (tree->is_leaf()) {
    out = "(" + tree->alias + ")";
  } else {
    render_body(tree, out);
  }
  return out;
}

static void collect_subtrees(const JoinTreeRef& t,
                             std::vector<std::vector<std::string>>& out) {
  if (!t || t->is_leaf()) return;
  collect_subtrees(t->left, out);
  collect_subtrees(t->right, out);
  auto leaves = leaf_aliases(t);
  std::sort(leaves.begin(), leaves.end());
  out.push_back(std::move(leaves));
}

std::vector<std::vector<std::string>> subtree_alias_sets(const JoinTreeRef& tree) {
  std::vector<std::vector<std::string>> out;
  collect_subtrees(tree, out);
  return out;
}

// ---------------------------------------------------------------------------
// Names
// ---------------------------------------------------------------------------

std::string_view to_string(ScanMethod m) {
  switch (m) {
    case ScanMethod::SeqScan: return "SeqScan";
    case ScanMethod::IndexScan: return "IndexScan";
    case ScanMethod::BitmapScan: return "BitmapScan";
  }
  return "SeqScan";
}

std::string_view to_string(JoinMethod m) {
  switch (m) {
    case JoinMethod::HashJoin: return "HashJoin";
    case JoinMethod::MergeJoin: return "MergeJoin";
    case JoinMethod::NestedLoop: return "NestedLoop";
  }
  return "HashJoin";
}

std::string_view to_string(HintMode m) {
  return m == HintMode::JoinOrder ? "join_order" : "full_plan";
}

HintMode hint_mode_from_string(std::string_view s) {
  if (s == "join_order") return HintMode::JoinOrder;
  if (s == "full_plan") return HintMode::FullPlan;
  raise(ErrorCode::InvalidConfig, "unknown hint mode '" + std::string(s) + "'");
}

std::string_view to_string(HintErrorKind kind) {
  switch (kind) {
    case HintErrorKind::BracketMismatch: return "BracketMismatch";
    case HintErrorKind::RepeatedChunk: return "RepeatedChunk";
    case HintErrorKind::UnknownAlias: return "UnknownAlias";
    case HintErrorKind::UnknownMethod: return "UnknownMethod";
    case HintErrorKind::DuplicateAlias: return "DuplicateAlias";
    case HintErrorKind::Truncated: return "Truncated";
  }
  return "Truncated";
}

static std::optional<ScanMethod> scan_method_from(std::string_view s) {
  if (s == "SeqScan") return ScanMethod::SeqScan;
  if (s == "IndexScan") return ScanMethod::IndexScan;
  if (s == "BitmapScan") return ScanMethod::BitmapScan;
  return std::nullopt;
}

static std::optional<JoinMethod> join_method_from(std::string_view s) {
  if (s == "HashJoin") return JoinMethod::HashJoin;
  if (s == "MergeJoin") return JoinMethod::MergeJoin;
  if (s == "NestedLoop") return JoinMethod::NestedLoop;
  return std::nullopt;
}

static bool is_hint_keyword(std::string_view s) {
  return s == "Leading" || scan_method_from(s) || join_method_from(s);
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

std::string serialize_hint(const Hint& hint) {
  std::string out;
  if (hint.mode == HintMode::JoinOrder) {
    if (!hint.leading) return out;
    return "Leading " + render_join_tree(hint.leading);
  }

  // Canonical clause order is derived from the Leading tree: scans in leaf
  // order, joins in post-order of internal nodes.
  std::vector<std::string> leaves = leaf_aliases(hint.leading);
  auto leaf_pos = [&](const std::string& alias) {
    auto it = std::find(leaves.begin(), leaves.end(), alias);
    return it == leaves.end() ? leaves.size() : static_cast<std::size_t>(it - leaves.begin());
  };

  std::vector<ScanClause> scans = hint.scans;
  std::stable_sort(scans.begin(), scans.end(), [&](const auto& a, const auto& b) {
    return leaf_pos(a.alias) < leaf_pos(b.alias);
  });

  auto subtrees = subtree_alias_sets(hint.leading);
  auto subtree_pos = [&](const JoinClause& c) {
    std::vector<std::string> key = c.aliases;
    std::sort(key.begin(), key.end());
    for (std::size_t i = 0; i < subtrees.size(); ++i) {
      if (subtrees[i] == key) return i;
    }
    return subtrees.size();
  };
  std::vector<JoinClause> joins = hint.joins;
  std::stable_sort(joins.begin(), joins.end(), [&](const auto& a, const auto& b) {
    return subtree_pos(a) < subtree_pos(b);
  });

  for (const auto& s : scans) {
    if (!out.empty()) out += ' ';
    out += to_string(s.method);
    out += '(';
    out += s.alias;
    out += ')';
  }
  for (const auto& j : joins) {
    if (!out.empty()) out += ' ';
    out += to_string(j.method);
    out += '(';
    for (std::size_t i = 0; i < j.aliases.size(); ++i) {
      if (i) out += ' ';
      out += j.aliases[i];
    }
    out += ')';
  }
  if (hint.leading && leaf_count(hint.leading) >= 2) {
    if (!out.empty()) out += ' ';
    out += "Leading ";
    out += render_join_tree(hint.leading);
  }
  return out;
}

bool operator==(const Hint& a, const Hint& b) {
  return a.mode == b.mode && serialize_hint(a) == serialize_hint(b);
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace {

struct Token {
  enum Kind { Ident, LParen, RParen, Junk, End } kind = End;
  std::string_view text;
  std::size_t pos = 0;
};

class Lexer {
 public:
  Lexer(std::string_view text, std::size_t start, std::size_t base_offset)
      : text_(text), i_(start), base_(base_offset) {}

  Token peek() {
    if (!peeked_) {
      peeked_ = lex();
    }
    return *peeked_;
  }

  Token next() {
    Token t = peek();
    peeked_.reset();
    return t;
  }

  std::size_t offset() const { return base_ + i_; }

 private:
  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }

  Token lex() {
    while (i_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[i_]))) {
      ++i_;
    }
    if (i_ >= text_.size()) return Token{Token::End, {}, base_ + i_};
    std::size_t start = i_;
    char c = text_[i_];
    if (c == '(') {
      ++i_;
      return Token{Token::LParen, text_.substr(start, 1), base_ + start};
    }
    if (c == ')') {
      ++i_;
      return Token{Token::RParen, text_.substr(start, 1), base_ + start};
    }
    if (ident_char(c)) {
      while (i_ < text_.size() && ident_char(text_[i_])) ++i_;
      return Token{Token::Ident, text_.substr(start, i_ - start), base_ + start};
    }
    ++i_;
    return Token{Token::Junk, text_.substr(start, 1), base_ + start};
  }

  std::string_view text_;
  std::size_t i_;
  std::size_t base_;
  std::optional<Token> peeked_;
};

struct Parser {
  Lexer lex;
  const std::vector<std::string>& known;
  std::map<std::string, int> multiplicity;
  std::optional<HintValidationError> error;

  Parser(std::string_view text, std::size_t base_offset,
         const std::vector<std::string>& known_aliases)
      : lex(text, 0, base_offset), known(known_aliases) {
    for (const auto& a : known) multiplicity[a] += 1;
  }

  void fail(HintErrorKind kind, std::size_t pos, std::string detail) {
    if (!error) error = HintValidationError{kind, pos, std::move(detail)};
  }

  bool check_alias(const Token& tok) {
    if (known.empty()) return true;
    if (multiplicity.count(std::string(tok.text))) return true;
    fail(HintErrorKind::UnknownAlias, tok.pos,
         "alias '" + std::string(tok.text) + "' is not a table of this query");
    return false;
  }

  // Parses a parenthesized group of tree elements. Flat n-ary lists are
  // accepted and left-folded into binary joins.
  JoinTreeRef parse_tree_group(std::map<std::string, int>& seen) {
    Token open = lex.next();  // caller ensured '('
    std::vector<JoinTreeRef> elems;
    while (true) {
      Token t = lex.peek();
      if (t.kind == Token::RParen) {
        lex.next();
        break;
      }
      if (t.kind == Token::End) {
        fail(HintErrorKind::BracketMismatch, t.pos,
             "unclosed '(' opened at offset " + std::to_string(open.pos));
        return nullptr;
      }
      if (t.kind == Token::LParen) {
        JoinTreeRef sub = parse_tree_group(seen);
        if (error) return nullptr;
        elems.push_back(std::move(sub));
        continue;
      }
      if (t.kind == Token::Junk) {
        fail(HintErrorKind::BracketMismatch, t.pos,
             "unexpected character '" + std::string(t.text) + "' in Leading clause");
        return nullptr;
      }
      lex.next();
      if (!check_alias(t)) return nullptr;
      std::string alias(t.text);
      int& count = seen[alias];
      ++count;
      int allowed = known.empty() ? 1 : multiplicity[alias];
      if (count > allowed) {
        fail(HintErrorKind::RepeatedChunk, t.pos,
             "alias '" + alias + "' repeated beyond its multiplicity");
        return nullptr;
      }
      elems.push_back(make_leaf(std::move(alias)));
    }
    if (elems.empty()) {
      fail(HintErrorKind::BracketMismatch, open.pos, "empty '()' group");
      return nullptr;
    }
    JoinTreeRef tree = elems[0];
    for (std::size_t i = 1; i < elems.size(); ++i) {
      tree = make_join(std::move(tree), elems[i]);
    }
    return tree;
  }

  // Parses the alias list of a scan or join clause.
  std::vector<std::pair<std::string, std::size_t>> parse_clause_args(
      const Token& head) {
    std::vector<std::pair<std::string, std::size_t>> args;
    Token t = lex.peek();
    if (t.kind == Token::End) {
      fail(HintErrorKind::Truncated, t.pos,
           "clause '" + std::string(head.text) + "' has no argument list");
      return args;
    }
    if (t.kind != Token::LParen) {
      fail(HintErrorKind::BracketMismatch, t.pos,
           "expected '(' after '" + std::string(head.text) + "'");
      return args;
    }
    lex.next();
    while (true) {
      t = lex.peek();
      if (t.kind == Token::RParen) {
        lex.next();
        break;
      }
      if (t.kind == Token::End) {
        fail(HintErrorKind::BracketMismatch, t.pos,
             "unclosed clause '" + std::string(head.text) + "'");
        return args;
      }
      if (t.kind != Token::Ident) {
        fail(HintErrorKind::BracketMismatch, t.pos,
             "expected alias or ')' in clause '" + std::string(head.text) + "'");
        return args;
      }
      lex.next();
      if (!check_alias(t)) return args;
      args.emplace_back(std::string(t.text), t.pos);
    }
    if (args.empty()) {
      fail(HintErrorKind::BracketMismatch, head.pos,
           "clause '" + std::string(head.text) + "' has an empty argument list");
    }
    return args;
  }
};

}  // namespace

static HintOrError parse_hint_at(std::string_view text, std::size_t base_offset,
                                 const std::vector<std::string>& known_aliases) {
  Parser p(text, base_offset, known_aliases);

  struct RawScan {
    ScanMethod method;
    std::string alias;
    std::size_t pos;
  };
  struct RawJoin {
    JoinMethod method;
    std::vector<std::string> aliases;
    std::size_t pos;
  };
  std::vector<RawScan> raw_scans;
  std::vector<RawJoin> raw_joins;
  JoinTreeRef leading;
  std::size_t first_join_pos = 0;
  bool any_clause = false;

  while (!p.error) {
    Token t = p.lex.peek();
    if (t.kind == Token::End) break;
    if (t.kind != Token::Ident) {
      p.fail(HintErrorKind::BracketMismatch, t.pos,
             "expected a clause, found '" + std::string(t.text) + "'");
      break;
    }
    p.lex.next();
    if (t.text == "Leading") {
      if (leading) {
        p.fail(HintErrorKind::RepeatedChunk, t.pos, "repeated Leading clause");
        break;
      }
      Token open = p.lex.peek();
      if (open.kind == Token::End) {
        p.fail(HintErrorKind::Truncated, open.pos, "Leading clause has no tree");
        break;
      }
      if (open.kind != Token::LParen) {
        p.fail(HintErrorKind::BracketMismatch, open.pos,
               "expected '(' after Leading");
        break;
      }
      std::map<std::string, int> seen;
      leading = p.parse_tree_group(seen);
      any_clause = true;
      continue;
    }
    if (auto sm = scan_method_from(t.text)) {
      auto args = p.parse_clause_args(t);
      if (p.error) break;
      if (args.size() != 1) {
        p.fail(HintErrorKind::BracketMismatch, t.pos,
               "scan clause takes exactly one alias");
        break;
      }
      raw_scans.push_back({*sm, args[0].first, args[0].second});
      any_clause = true;
      continue;
    }
    if (auto jm = join_method_from(t.text)) {
      auto args = p.parse_clause_args(t);
      if (p.error) break;
      if (args.size() < 2) {
        p.fail(HintErrorKind::BracketMismatch, t.pos,
               "join clause takes at least two aliases");
        break;
      }
      RawJoin j;
      j.method = *jm;
      j.pos = t.pos;
      std::set<std::string> dedup;
      for (auto& [alias, pos] : args) {
        if (!dedup.insert(alias).second) {
          p.fail(HintErrorKind::DuplicateAlias, pos,
                 "alias '" + alias + "' repeated within a join clause");
          break;
        }
        j.aliases.push_back(alias);
      }
      if (p.error) break;
      if (raw_joins.empty()) first_join_pos = t.pos;
      raw_joins.push_back(std::move(j));
      any_clause = true;
      continue;
    }
    p.fail(HintErrorKind::UnknownMethod, t.pos,
           "'" + std::string(t.text) + "' is not a hint method");
    break;
  }

  if (p.error) return *p.error;
  if (!any_clause) {
    return HintValidationError{HintErrorKind::Truncated, base_offset + text.size(),
                               "no hint clauses found"};
  }

  // Duplicate scan clauses for the same table.
  std::set<std::string> scan_seen;
  for (const auto& s : raw_scans) {
    if (!scan_seen.insert(s.alias).second) {
      return HintValidationError{HintErrorKind::DuplicateAlias, s.pos,
                                 "alias '" + s.alias + "' has two scan clauses"};
    }
  }

  if (!leading) {
    if (!raw_joins.empty()) {
      return HintValidationError{HintErrorKind::UnknownAlias, first_join_pos,
                                 "join clauses require a Leading clause"};
    }
    if (raw_scans.size() > 1) {
      return HintValidationError{HintErrorKind::UnknownAlias, raw_scans[1].pos,
                                 "multiple scan clauses require a Leading clause"};
    }
    leading = make_leaf(raw_scans[0].alias);
  }

  // Every clause alias must be a Leading leaf.
  auto leaves = leaf_aliases(leading);
  std::set<std::string> leaf_set(leaves.begin(), leaves.end());
  for (const auto& s : raw_scans) {
    if (!leaf_set.count(s.alias)) {
      return HintValidationError{HintErrorKind::UnknownAlias, s.pos,
                                 "scan alias '" + s.alias + "' not in Leading clause"};
    }
  }

  // Join clauses must name the leaf set of some Leading subtree; rebuild them
  // in canonical post-order with leaf-ordered aliases.
  struct SubtreeInfo {
    std::vector<std::string> sorted;
    std::vector<std::string> in_order;
  };
  std::vector<SubtreeInfo> subtrees;
  {
    auto sets = subtree_alias_sets(leading);
    // Rebuild the in-order alias list for each internal node in post-order.
    std::vector<std::vector<std::string>> ordered;
    struct Walk {
      static void go(const JoinTreeRef& t, std::vector<std::vector<std::string>>& out) {
        if (!t || t->is_leaf()) return;
        go(t->left, out);
        go(t->right, out);
        out.push_back(leaf_aliases(t));
      }
    };
    Walk::go(leading, ordered);
    for (std::size_t i = 0; i < sets.size(); ++i) {
      subtrees.push_back({sets[i], ordered[i]});
    }
  }

  std::vector<JoinClause> joins;
  std::set<std::vector<std::string>> join_sets_seen;
  std::vector<std::pair<std::size_t, JoinClause>> matched;  // subtree idx, clause
  for (const auto& j : raw_joins) {
    std::vector<std::string> key = j.aliases;
    std::sort(key.begin(), key.end());
    if (!join_sets_seen.insert(key).second) {
      return HintValidationError{HintErrorKind::DuplicateAlias, j.pos,
                                 "two join clauses name the same table set"};
    }
    bool found = false;
    for (std::size_t i = 0; i < subtrees.size(); ++i) {
      if (subtrees[i].sorted == key) {
        matched.push_back({i, JoinClause{j.method, subtrees[i].in_order}});
        found = true;
        break;
      }
    }
    if (!found) {
      return HintValidationError{
          HintErrorKind::UnknownAlias, j.pos,
          "join clause does not match any subtree of the Leading clause"};
    }
  }
  std::sort(matched.begin(), matched.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& [idx, clause] : matched) joins.push_back(std::move(clause));

  Hint hint;
  hint.leading = leading;
  hint.joins = std::move(joins);
  if (!raw_scans.empty()) {
    // Canonical scan order follows the Leading leaf order.
    std::map<std::string, ScanMethod> by_alias;
    for (const auto& s : raw_scans) by_alias[s.alias] = s.method;
    for (const auto& leaf : leaves) {
      auto it = by_alias.find(leaf);
      if (it != by_alias.end()) hint.scans.push_back({it->second, leaf});
    }
  }
  hint.mode = (hint.scans.empty() && hint.joins.empty()) ? HintMode::JoinOrder
                                                         : HintMode::FullPlan;
  return hint;
}

HintOrError parse_hint(std::string_view text,
                       const std::vector<std::string>& known_aliases) {
  return parse_hint_at(text, 0, known_aliases);
}

HintOrError normalize_generated_text(std::string_view text,
                                     const std::vector<std::string>& known_aliases,
                                     std::size_t budget) {
  if (text.empty()) {
    return HintValidationError{HintErrorKind::Truncated, 0, "empty output"};
  }
  std::string_view window = text.substr(0, std::min(text.size(), budget));

  // Locate the first hint-like token.
  std::optional<std::size_t> start;
  {
    Lexer probe(window, 0, 0);
    while (true) {
      Token t = probe.next();
      if (t.kind == Token::End) break;
      if (t.kind == Token::Ident && is_hint_keyword(t.text)) {
        start = t.pos;
        break;
      }
    }
  }
  if (!start) {
    return HintValidationError{HintErrorKind::Truncated, window.size(),
                               "no hint found in generated output"};
  }

  // Extend the span over consecutive complete clauses; stop at the first
  // token that cannot start one. An unclosed clause runs to the end of the
  // examined window and the parser reports the failure.
  std::size_t end = *start;
  {
    Lexer walk(window, *start, 0);
    while (true) {
      Token head = walk.peek();
      if (head.kind != Token::Ident || !is_hint_keyword(head.text)) break;
      walk.next();
      end = head.pos + head.text.size();
      Token open = walk.peek();
      if (open.kind != Token::LParen) break;
      int depth = 0;
      bool closed = false;
      while (true) {
        Token t = walk.next();
        if (t.kind == Token::End) {
          end = window.size();
          break;
        }
        if (t.kind == Token::LParen) ++depth;
        if (t.kind == Token::RParen) {
          --depth;
          if (depth == 0) {
            end = t.pos + 1;
            closed = true;
            break;
          }
        }
      }
      if (!closed) break;
    }
  }

  return parse_hint_at(window.substr(*start, end - *start), *start, known_aliases);
}

bool hint_equals_default(const Hint& hint, const Hint& default_plan_hint) {
  if (hint.mode == HintMode::JoinOrder ||
      default_plan_hint.mode == HintMode::JoinOrder) {
    return join_tree_equal(hint.leading, default_plan_hint.leading);
  }
  return hint == default_plan_hint;
}

std::vector<std::string> translate_to_join_sequence(const Hint& hint) {
  return leaf_aliases(hint.leading);
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

static std::size_t saturating_mul(std::size_t a, std::size_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > SIZE_MAX / b) return SIZE_MAX;
  return a * b;
}

std::size_t hint_space_size(std::size_t n, HintMode mode) {
  if (n == 0) return 0;
  // Catalan(n-1) tree shapes times n! leaf orders.
  std::size_t catalan = 1;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    catalan = saturating_mul(catalan, 2 * (2 * i + 1));
    catalan /= (i + 2);
  }
  std::size_t size = catalan;
  for (std::size_t i = 2; i <= n; ++i) size = saturating_mul(size, i);
  if (mode == HintMode::FullPlan) {
    for (std::size_t i = 0; i < n; ++i) size = saturating_mul(size, 3);
    for (std::size_t i = 0; i + 1 < n; ++i) size = saturating_mul(size, 3);
  }
  return size;
}

static std::vector<JoinTreeRef> build_trees(std::span<const std::string> seq) {
  std::vector<JoinTreeRef> out;
  if (seq.size() == 1) {
    out.push_back(make_leaf(seq[0]));
    return out;
  }
  for (std::size_t split = 1; split < seq.size(); ++split) {
    auto lefts = build_trees(seq.subspan(0, split));
    auto rights = build_trees(seq.subspan(split));
    for (const auto& l : lefts) {
      for (const auto& r : rights) {
        out.push_back(make_join(l, r));
      }
    }
  }
  return out;
}

static void assign_methods(const JoinTreeRef& tree, std::vector<Hint>& out) {
  auto leaves = leaf_aliases(tree);
  std::vector<std::vector<std::string>> join_orders;
  struct Walk {
    static void go(const JoinTreeRef& t, std::vector<std::vector<std::string>>& out) {
      if (!t || t->is_leaf()) return;
      go(t->left, out);
      go(t->right, out);
      out.push_back(leaf_aliases(t));
    }
  };
  Walk::go(tree, join_orders);

  const std::size_t n_scans = leaves.size();
  const std::size_t n_joins = join_orders.size();
  std::vector<int> digits(n_scans + n_joins, 0);
  const ScanMethod scan_methods[] = {ScanMethod::SeqScan, ScanMethod::IndexScan,
                                     ScanMethod::BitmapScan};
  const JoinMethod join_methods[] = {JoinMethod::HashJoin, JoinMethod::MergeJoin,
                                     JoinMethod::NestedLoop};
  while (true) {
    Hint h;
    h.mode = HintMode::FullPlan;
    h.leading = tree;
    for (std::size_t i = 0; i < n_scans; ++i) {
      h.scans.push_back({scan_methods[digits[i]], leaves[i]});
    }
    for (std::size_t i = 0; i < n_joins; ++i) {
      h.joins.push_back({join_methods[digits[n_scans + i]], join_orders[i]});
    }
    out.push_back(std::move(h));

    std::size_t k = 0;
    while (k < digits.size()) {
      if (++digits[k] < 3) break;
      digits[k] = 0;
      ++k;
    }
    if (k == digits.size()) break;
  }
}

std::vector<Hint> enumerate_hints(const std::vector<std::string>& aliases,
                                  HintMode mode, std::size_t max_aliases,
                                  std::size_t max_hints) {
  if (aliases.empty()) return {};
  if (aliases.size() > max_aliases) {
    raise(ErrorCode::SpaceTooLarge,
          "hint space over " + std::to_string(aliases.size()) +
              " aliases exceeds the bound of " + std::to_string(max_aliases));
  }
  std::size_t size = hint_space_size(aliases.size(), mode);
  if (size > max_hints) {
    raise(ErrorCode::SpaceTooLarge,
          "hint space of " + std::to_string(size) + " exceeds the cap of " +
              std::to_string(max_hints));
  }

  std::vector<Hint> out;
  out.reserve(size);
  std::vector<std::string> perm = aliases;
  std::sort(perm.begin(), perm.end());
  do {
    for (const auto& tree : build_trees(perm)) {
      if (mode == HintMode::JoinOrder) {
        Hint h;
        h.mode = HintMode::JoinOrder;
        h.leading = tree;
        out.push_back(std::move(h));
      } else {
        assign_methods(tree, out);
      }
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

}  // namespace hintloop
