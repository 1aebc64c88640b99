#include <doctest.h>

#include "flare/error.hpp"
#include "flare/model.hpp"
#include "support.hpp"

using namespace flare;
using flare::test::vec;

namespace {

StoredRule rule_with_counters(const Schema& s, const std::string& text, std::vector<int> counters) {
  StoredRule r = make_rule(s, vec(s, text));
  r.counters = std::move(counters);
  return r;
}

}  // namespace

TEST_CASE("schema rejects malformed attribute lists") {
  CHECK_THROWS_AS(Schema({AttributeDef::nominal("a", {"x"})}), SchemaMismatch);
  CHECK_THROWS_AS(Schema({AttributeDef::nominal("a", {"x"}), AttributeDef::nominal("a", {"y"})}), SchemaMismatch);
  CHECK_THROWS_AS(Schema({AttributeDef::nominal("a", {"x", "x"}), AttributeDef::nominal("b", {"y"})}),
                  SchemaMismatch);
  CHECK_THROWS_AS(Schema({AttributeDef::nominal("a", {}), AttributeDef::nominal("b", {"y"})}), SchemaMismatch);
  CHECK_THROWS_AS(Schema({AttributeDef::linear("a", 1.0, 1.0), AttributeDef::nominal("b", {"y"})}), SchemaMismatch);
  const Schema ok({AttributeDef::linear("x", 0, 10), AttributeDef::nominal("b", {"y", "n"})});
  CHECK(ok.index_of("b") == 1);
  CHECK_FALSE(ok.find("c"));
  CHECK_THROWS_AS(ok.index_of("c"), SchemaMismatch);
  CHECK(ok[0].delta() == doctest::Approx(0.5));
}

TEST_CASE("make_rule starts the counters at the stated target") {
  const auto s = test::nominal_schema({3, 3, 4});
  const auto r = make_rule(s, vec(s, "1 * 2_T"));
  CHECK(r.counters == std::vector<int>{0, 0, 1, 0});
  CHECK(r.dynamic_priority == 0);
  CHECK(r.num_covers == 0);
  CHECK(effective_target_value(r) == 2);
}

TEST_CASE("effective target is the counter argmax and ties keep the current value") {
  const auto s = test::nominal_schema({2, 3});
  // current value 0, counters favour 2
  CHECK(effective_target_value(rule_with_counters(s, "1 0_T", {1, 0, 3})) == 2);
  // tie between 0 and 2: the current value 2 stays
  CHECK(effective_target_value(rule_with_counters(s, "1 2_T", {2, 0, 2})) == 2);
  // tie not involving the current value: lowest index among the maxima
  CHECK(effective_target_value(rule_with_counters(s, "1 0_T", {0, 2, 2})) == 1);

  auto r = rule_with_counters(s, "1 0_T", {1, 0, 0});
  record_observation(r, 2);
  CHECK(r.target_value() == 0);  // 1:1 tie keeps 0
  record_observation(r, 2);
  CHECK(r.target_value() == 2);
  CHECK(r.counters == std::vector<int>{1, 0, 2});
  CHECK_THROWS_AS(record_observation(r, 3), DomainError);
}

TEST_CASE("validate_vector reports each violated invariant") {
  const Schema s({AttributeDef::nominal("a", {"x", "y"}), AttributeDef::linear("b", 0, 1),
                  AttributeDef::nominal("c", {"p", "q"})});
  CHECK(validate_vector(s, vec(s, "x 0.5 p_T")).empty());
  CHECK(validate_vector(s, vec(s, "? * q_T")).empty());

  const auto all_care = vec(s, "* * p_T");
  CHECK(validate_vector(s, all_care).size() == 1);
  CHECK(validate_vector(s, all_care, false).empty());

  auto bad = vec(s, "x 0.5 p_T");
  bad[0] = Cell::nominal(2);
  CHECK(validate_vector(s, bad).size() == 1);
  bad = vec(s, "x 0.5 p_T");
  bad[1] = Cell::linear(1.5);
  CHECK(validate_vector(s, bad).size() == 1);
  bad = vec(s, "x 0.5 p_T");
  bad[2] = Cell::dont_care();
  CHECK(validate_vector(s, bad).size() == 1);
  bad = vec(s, "x 0.5 p_T");
  bad.static_priority = -1;
  CHECK(validate_vector(s, bad).size() == 1);
  bad = vec(s, "x 0.5 p_T");
  bad.cells.pop_back();
  CHECK(validate_vector(s, bad).size() == 1);
}

TEST_CASE("validate_rule checks counters against the effective value") {
  const auto s = test::nominal_schema({2, 3});
  CHECK(validate_rule(s, rule_with_counters(s, "1 1_T", {0, 2, 1})).empty());
  CHECK_FALSE(validate_rule(s, rule_with_counters(s, "1 1_T", {0, 1, 2})).empty());
  CHECK_FALSE(validate_rule(s, rule_with_counters(s, "1 1_T", {0, 1})).empty());
  StoredRule open;
  open.vector = vec(s, "1 ?_T");
  open.counters = {0, 0, 0};
  CHECK_FALSE(validate_rule(s, open).empty());

  const Schema lin({AttributeDef::nominal("a", {"x"}), AttributeDef::linear("b", 0, 1)});
  StoredRule r;
  r.vector = vec(lin, "x 0.5_T");
  CHECK_FALSE(validate_rule(lin, r).empty());
}

TEST_CASE("knowledge base ids are fresh and replace keeps the position") {
  const auto s = test::nominal_schema({3, 3, 2});
  KnowledgeBase kb(s);
  const auto a = kb.add(vec(s, "0 * 0_T"));
  const auto b = kb.add(vec(s, "1 * 1_T"));
  const auto c = kb.add(vec(s, "2 * 0_T"));
  CHECK(a < b);
  CHECK(b < c);
  CHECK(kb.size() == 3);
  CHECK(kb.position(b) == 1);

  const auto b2 = kb.replace(b, make_rule(s, vec(s, "1 2 1_T")));
  CHECK(b2 > c);
  CHECK(kb.position(b2) == 1);
  CHECK_FALSE(kb.position(b));
  CHECK(kb.find(b) == nullptr);
  CHECK(kb.find(b2)->vector == vec(s, "1 2 1_T"));
  CHECK_THROWS_AS(kb.replace(b, make_rule(s, vec(s, "1 2 1_T"))), Error);
}

TEST_CASE("knowledge base refuses a rule covering everything") {
  const auto s = test::nominal_schema({3, 2});
  KnowledgeBase kb(s);
  CHECK_THROWS_AS(kb.add(vec(s, "* 0_T")), InvalidVector);
  CHECK(kb.empty());
}

TEST_CASE("retarget moves the target and leaves it unknown") {
  const auto s = test::nominal_schema({3, 3, 2});
  const auto v = retarget(vec(s, "0 1 1_T"), 1);
  CHECK(v.target == 1);
  CHECK(v[1].is_dont_know());
  CHECK(v[2] == Cell::nominal(1));
}
