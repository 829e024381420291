#include "doctest.h"

#include <set>

#include "hintloop/errors.hpp"
#include "hintloop/hint.hpp"
#include "test_helpers.hpp"

using namespace hintloop;

namespace {
const std::vector<std::string> kAbc = {"a", "b", "c"};

Hint parse_ok(const std::string& text, const std::vector<std::string>& aliases = {}) {
  auto result = parse_hint(text, aliases);
  REQUIRE_MESSAGE(!is_error(result), get_error(result).detail);
  return get_hint(result);
}

HintValidationError parse_err(const std::string& text,
                              const std::vector<std::string>& aliases = {}) {
  auto result = parse_hint(text, aliases);
  REQUIRE(is_error(result));
  return get_error(result);
}
}  // namespace

TEST_CASE("join-order hint parses to the expected tree") {
  Hint h = parse_ok("Leading (a (b c))", kAbc);
  CHECK(h.mode == HintMode::JoinOrder);
  CHECK(leaf_aliases(h.leading) == std::vector<std::string>{"a", "b", "c"});
  CHECK(h.leading->left->is_leaf());
  CHECK_FALSE(h.leading->right->is_leaf());
  CHECK(serialize_hint(h) == "Leading (a (b c))");
}

TEST_CASE("full-plan serialization orders scans, joins, then Leading") {
  Hint h = parse_ok("Leading (a b) HashJoin(a b) SeqScan(b) SeqScan(a)", {"a", "b"});
  CHECK(h.mode == HintMode::FullPlan);
  std::string text = serialize_hint(h);
  CHECK(text == "SeqScan(a) SeqScan(b) HashJoin(a b) Leading (a b)");
  CHECK(text.find("HashJoin(a b)") < text.find("Leading"));
}

TEST_CASE("flat leading lists left-fold into binary trees") {
  Hint h = parse_ok("Leading (a b c)", kAbc);
  CHECK(serialize_hint(h) == "Leading ((a b) c)");
}

TEST_CASE("single-table hints") {
  Hint scan = parse_ok("SeqScan(t)", {"t"});
  CHECK(scan.mode == HintMode::FullPlan);
  CHECK(serialize_hint(scan) == "SeqScan(t)");  // no Leading clause
  Hint jo = parse_ok("Leading (t)", {"t"});
  CHECK(serialize_hint(jo) == "Leading (t)");
}

TEST_CASE("bracket mismatch is reported with its offset") {
  auto e = parse_err("Leading ((a b c)", kAbc);
  CHECK(e.kind == HintErrorKind::BracketMismatch);
  CHECK(e.position <= std::string("Leading ((a b c)").size());
}

TEST_CASE("repeated aliases beyond multiplicity") {
  auto e = parse_err("Leading (a a a a)", {"a", "b"});
  CHECK(e.kind == HintErrorKind::RepeatedChunk);
}

TEST_CASE("every validation error kind is reachable") {
  CHECK(parse_err("Leading ((a b", kAbc).kind == HintErrorKind::BracketMismatch);
  CHECK(parse_err("Leading (a a)", kAbc).kind == HintErrorKind::RepeatedChunk);
  CHECK(parse_err("Leading (a z)", kAbc).kind == HintErrorKind::UnknownAlias);
  CHECK(parse_err("FooScan(a) Leading (a b)", kAbc).kind == HintErrorKind::UnknownMethod);
  CHECK(parse_err("SeqScan(a) IndexScan(a) Leading (a b)", kAbc).kind ==
        HintErrorKind::DuplicateAlias);
  CHECK(parse_err("Leading", kAbc).kind == HintErrorKind::Truncated);
  auto norm = normalize_generated_text("", kAbc, 4096);
  REQUIRE(is_error(norm));
  CHECK(get_error(norm).kind == HintErrorKind::Truncated);
}

TEST_CASE("join clause must match a Leading subtree") {
  auto e = parse_err("HashJoin(a c) Leading ((a b) c)", kAbc);
  CHECK(e.kind == HintErrorKind::UnknownAlias);
  auto dup = parse_err("HashJoin(a b) MergeJoin(b a) Leading ((a b) c)", kAbc);
  CHECK(dup.kind == HintErrorKind::DuplicateAlias);
  auto in_clause = parse_err("HashJoin(a a) Leading (a b)", kAbc);
  CHECK(in_clause.kind == HintErrorKind::DuplicateAlias);
}

TEST_CASE("parse-serialize round trip over random hints") {
  Rng rng(42);
  for (int i = 0; i < 1000; ++i) {
    HintMode mode = (i % 2) ? HintMode::FullPlan : HintMode::JoinOrder;
    Hint h = testing::random_hint(rng, mode);
    std::string text = serialize_hint(h);
    auto parsed = parse_hint(text);
    REQUIRE_MESSAGE(!is_error(parsed), (text + ": " + get_error(parsed).detail));
    CHECK(get_hint(parsed) == h);
    CHECK(serialize_hint(get_hint(parsed)) == text);
  }
}

TEST_CASE("normalize strips prose around the first hint-like span") {
  auto r = normalize_generated_text("Here is the plan: Leading (a b)", {"a", "b"}, 4096);
  REQUIRE(!is_error(r));
  CHECK(serialize_hint(get_hint(r)) == "Leading (a b)");

  auto trailing = normalize_generated_text(
      "Sure!\nSeqScan(a) SeqScan(b) HashJoin(a b) Leading (a b)\nHope that helps.",
      {"a", "b"}, 4096);
  REQUIRE(!is_error(trailing));
  CHECK(get_hint(trailing).mode == HintMode::FullPlan);
}

TEST_CASE("runaway repetition aborts within the budget") {
  std::string runaway;
  while (runaway.size() < 10000) runaway += "mk k ";
  auto r = normalize_generated_text(runaway, {"mk", "k"}, 4096);
  REQUIRE(is_error(r));
  CHECK(get_error(r).kind == HintErrorKind::Truncated);
  CHECK(get_error(r).position == 4096);

  // Repetition inside a Leading clause surfaces as the repeated chunk itself.
  std::string leading_runaway = "Leading (";
  while (leading_runaway.size() < 10000) leading_runaway += "mk k ";
  auto rr = normalize_generated_text(leading_runaway, {"mk", "k"}, 4096);
  REQUIRE(is_error(rr));
  CHECK(get_error(rr).kind == HintErrorKind::RepeatedChunk);
}

TEST_CASE("normalize examines at most the budget") {
  std::string text = std::string(100, 'x') + " Leading (a b)";
  auto within = normalize_generated_text(text, {"a", "b"}, text.size());
  CHECK(!is_error(within));
  auto clipped = normalize_generated_text(text, {"a", "b"}, 50);
  REQUIRE(is_error(clipped));
  CHECK(get_error(clipped).kind == HintErrorKind::Truncated);
  CHECK(get_error(clipped).position <= 50);
}

TEST_CASE("hint equality against the default plan") {
  Hint full = parse_ok("SeqScan(a) SeqScan(b) HashJoin(a b) Leading (a b)", {"a", "b"});
  Hint same = parse_ok("SeqScan(a) SeqScan(b) HashJoin(a b) Leading (a b)", {"a", "b"});
  CHECK(hint_equals_default(same, full));

  Hint other_method = parse_ok("SeqScan(a) SeqScan(b) MergeJoin(a b) Leading (a b)",
                               {"a", "b"});
  CHECK_FALSE(hint_equals_default(other_method, full));

  Hint jo = parse_ok("Leading (a b)", {"a", "b"});
  CHECK(hint_equals_default(jo, full));  // join-order comparison mode
}

TEST_CASE("join sequence translation walks the Leading leaves") {
  CHECK(translate_to_join_sequence(parse_ok("Leading (a (b c))", kAbc)) ==
        std::vector<std::string>{"a", "b", "c"});
  CHECK(translate_to_join_sequence(parse_ok("Leading (a)", {"a"})) ==
        std::vector<std::string>{"a"});
  CHECK(translate_to_join_sequence(parse_ok("Leading ((a b) (c d))",
                                            {"a", "b", "c", "d"})) ==
        std::vector<std::string>{"a", "b", "c", "d"});
}

TEST_CASE("hint space enumeration counts") {
  CHECK(enumerate_hints({"a", "b"}, HintMode::JoinOrder).size() == 2);
  auto twelve = enumerate_hints({"a", "b", "c"}, HintMode::JoinOrder);
  CHECK(twelve.size() == 12);
  std::set<std::string> distinct;
  for (const auto& h : twelve) distinct.insert(serialize_hint(h));
  CHECK(distinct.size() == 12);

  CHECK(enumerate_hints({"a"}, HintMode::FullPlan).size() == 3);
  CHECK(hint_space_size(3, HintMode::FullPlan) == 12 * 27 * 9);
  CHECK(enumerate_hints({"a", "b", "c"}, HintMode::FullPlan).size() ==
        hint_space_size(3, HintMode::FullPlan));

  std::vector<std::string> seven = {"a", "b", "c", "d", "e", "f", "g"};
  CHECK_THROWS_AS(enumerate_hints(seven, HintMode::JoinOrder), Error);
  try {
    enumerate_hints(seven, HintMode::JoinOrder);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SpaceTooLarge);
  }
}

TEST_CASE("error positions stay within the input") {
  Rng rng(7);
  const std::string junk[] = {"Leading ((((", ")", "Leading (a b))", "HashJoin(",
                              "SeqScan", "Leading (a", "x(y)"};
  for (const auto& text : junk) {
    auto r = parse_hint(text, kAbc);
    if (is_error(r)) {
      CHECK(get_error(r).position <= text.size());
    }
  }
}
