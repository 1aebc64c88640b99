#include <doctest.h>

#include <set>

#include "flare/error.hpp"
#include "flare/kb_io.hpp"
#include "flare/metrics.hpp"
#include "flare/reasoner.hpp"
#include "support.hpp"

using namespace flare;
using flare::test::vec;

namespace {

StoredRule rule(const Schema& s, const std::string& text, int p = 0, int dp = 0, int c = 0) {
  auto v = vec(s, text);
  v.static_priority = p;
  auto r = make_rule(s, v);
  r.dynamic_priority = dp;
  r.num_covers = c;
  return r;
}

// republican quaker pacifist
Schema nixon_schema() { return test::nominal_schema({2, 2, 2}); }

}  // namespace

TEST_CASE("empty knowledge base leaves the target unknown") {
  const auto s = test::nominal_schema({3, 3, 2});
  const KnowledgeBase kb(s);
  const auto out = reason(kb, vec(s, "0 1 ?_T"), {});
  CHECK_FALSE(out.derived_target);
  CHECK_FALSE(out.winner);
  CHECK(out.completed == vec(s, "0 1 ?_T"));
  CHECK(out.trace.empty());
  CHECK(out.iterations == 1);
}

TEST_CASE("query validation") {
  const auto s = test::nominal_schema({3, 3, 2});
  KnowledgeBase kb(s);
  kb.add(vec(s, "0 * 1_T"));
  CHECK_THROWS_AS(reason(std::as_const(kb), vec(s, "0 1 1_T"), {}), InvalidVector);
  auto bad = vec(s, "0 1 ?_T");
  bad[0] = Cell::nominal(7);
  CHECK_THROWS_AS(reason(std::as_const(kb), bad, {}), InvalidVector);
  bad.cells.pop_back();
  CHECK_THROWS_AS(reason(std::as_const(kb), bad, {}), SchemaMismatch);
}

TEST_CASE("completion copies the cells of a matching definition") {
  const auto kb = load_kb(test::data_path("kb/eyes.kb"));
  const auto& s = kb.schema();
  const auto out = reason(kb, vec(s, "? dry ?_T"), {});
  CHECK(out.completed == vec(s, "low dry 0_T"));
  REQUIRE(out.trace.size() == 2);
  CHECK(out.trace[0].mechanism == Mechanism::completion);
  CHECK(out.trace[0].attribute == 0);
  CHECK(out.trace[0].depth == 0);
  CHECK(out.trace[1].attribute == 2);

  // no definition for eyes=normal: tpr stays open and fit comes from the
  // nearest rule
  const auto other = reason(kb, vec(s, "? normal ?_T"), {});
  CHECK(other.completed[0].is_dont_know());
  CHECK(other.derived_target == 0u);
  CHECK(other.trace.back().mechanism == Mechanism::similarity);
  CHECK(other.winner_distance == doctest::Approx(1.0));
}

TEST_CASE("completion never overwrites an asserted cell") {
  const auto kb = load_kb(test::data_path("kb/eyes.kb"));
  const auto& s = kb.schema();
  const auto done = complete(kb, vec(s, "normal dry ?_T"), 0);
  CHECK(done == vec(s, "normal dry ?_T"));
}

TEST_CASE("completion picks among several definitions by seed, reproducibly") {
  const auto s = test::nominal_schema({4, 2, 2});
  KnowledgeBase kb(s);
  for (int v = 0; v < 4; ++v) {
    auto d = vec(s, std::to_string(v) + " 1_T *");
    d.is_definition = true;
    kb.add(d);
  }
  std::set<std::size_t> seen;
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    const auto a = complete(kb, vec(s, "? 1 ?_T"), seed);
    const auto b = complete(kb, vec(s, "? 1 ?_T"), seed);
    CHECK(a == b);
    REQUIRE(a[0].asserted());
    seen.insert(a[0].index());
  }
  CHECK(seen.size() == 4);
}

TEST_CASE("forward chaining derives subgoals from a snapshot per pass") {
  const auto kb = load_kb(test::data_path("kb/mediadv_first12.kb"));
  const auto& s = kb.schema();
  const auto out = reason(kb, vec(s, "1 ? 1 ? 0 0 ?_T"), {});
  CHECK(out.completed == vec(s, "1 1 1 0 0 0 2_T"));
  CHECK(out.derived_target == 2u);
  CHECK(out.iterations == 2);
  REQUIRE(out.trace.size() == 3);
  CHECK(out.trace[0].depth == 1);
  CHECK(s[out.trace[0].attribute].name == "stimulus-situation");
  CHECK(out.trace[0].via.value == 2);
  CHECK(out.trace[1].depth == 1);
  CHECK(s[out.trace[1].attribute].name == "appropriate-response");
  CHECK(out.trace[1].via.value == 5);
  CHECK(out.trace[2].depth == 2);
  CHECK(out.trace[2].via.value == 7);
  CHECK(out.winner_distance == 0.0);
}

TEST_CASE("queries against the learned running example") {
  const auto kb = load_kb(test::data_path("kb/mediadv_learned.kb"));
  const auto& s = kb.schema();

  const auto a = reason(kb, vec(s, "1 ? 0 ? 0 1 ?_T"), {});
  CHECK(a.derived_target == 2u);
  CHECK(a.completed == vec(s, "1 1 0 0 0 1 2_T"));
  // the lecture rule and the slides rule conflict; dynamic priority decides
  CHECK(a.conflicts.size() == 1);
  CHECK(kb.find(*a.winner)->dynamic_priority == 2);

  const auto b = reason(kb, vec(s, "1 ? 2 ? 0 0 ?_T"), {});
  CHECK(b.derived_target == 1u);
  CHECK(b.completed == vec(s, "1 1 2 1 0 0 1_T"));
  CHECK(kb.find(*b.winner)->static_priority() == 3);
}

TEST_CASE("iterations of a definition chain") {
  for (std::size_t n : {3u, 4u, 6u, 9u}) {
    const auto s = test::nominal_schema(std::vector<std::size_t>(n, 2));
    KnowledgeBase kb(s);
    // a_i = 1 implies a_{i+1} = 1, the last link concluding the target
    for (std::size_t i = 0; i + 1 < n; ++i) {
      Vector v;
      v.cells.assign(n, Cell::dont_care());
      v.target = i + 1;
      v[i] = Cell::nominal(1);
      v[i + 1] = Cell::nominal(1);
      kb.add(v);
    }
    Vector q;
    q.cells.assign(n, Cell::dont_know());
    q.target = n - 1;
    q[0] = Cell::nominal(1);
    const auto out = reason(kb, q, {});
    CHECK(out.derived_target == 1u);
    // one pass per open subgoal plus the final pass that finds nothing
    CHECK(out.iterations == static_cast<int>(n) - 1);
    CHECK(out.iterations == iteration_bound(q));
    for (std::size_t i = 0; i + 2 < n; ++i) {
      CHECK(out.trace[i].attribute == i + 1);
      CHECK(out.trace[i].depth == static_cast<int>(i) + 1);
    }
  }
}

TEST_CASE("resolve applies the priority keys in order") {
  const auto s = test::nominal_schema({2, 2, 2, 3});
  const auto general = rule(s, "1 * * 0_T", 9, 9, 9);
  const auto specific = rule(s, "1 1 * 1_T");
  const auto high_p = rule(s, "1 1 * 2_T", 1);
  const auto high_dp = rule(s, "1 * 1 1_T", 0, 4);
  const auto high_c = rule(s, "1 * 1 2_T", 0, 0, 5);
  const auto plain = rule(s, "* 1 1 0_T");

  std::vector<const StoredRule*> c{&general, &specific};
  CHECK(resolve(c) == &specific);
  c = {&specific, &high_p};
  CHECK(resolve(c) == &high_p);
  c = {&plain, &high_dp};
  CHECK(resolve(c) == &high_dp);
  c = {&plain, &high_c};
  CHECK(resolve(c) == &high_c);
  c = {&high_c, &high_dp};
  CHECK(resolve(c) == &high_dp);
  c = {&plain, &specific};
  CHECK(resolve(c) == &plain);  // full tie: first in order
  c = {&specific, &plain};
  CHECK(resolve(c) == &specific);
  CHECK(resolve({}) == nullptr);
}

TEST_CASE("conflicting defaults need all five conditions") {
  const auto s = nixon_schema();
  const auto rep = rule(s, "1 * 0_T");
  const auto qua = rule(s, "* 1 1_T");
  const auto nixon = vec(s, "1 1 ?_T");
  CHECK(conflicting_defaults(s, rep, qua, nixon));
  CHECK(conflicting_defaults(s, qua, rep, nixon));
  // not both covering
  CHECK_FALSE(conflicting_defaults(s, rep, qua, vec(s, "1 0 ?_T")));
  // different specificity
  CHECK_FALSE(conflicting_defaults(s, rep, rule(s, "1 1 1_T"), nixon));
  // different static priority
  CHECK_FALSE(conflicting_defaults(s, rep, rule(s, "* 1 1_T", 2), nixon));
  // same conclusion
  CHECK_FALSE(conflicting_defaults(s, rep, rule(s, "* 1 0_T"), nixon));
}

TEST_CASE("dynamic priority rises only when the actual target is known") {
  const auto s = nixon_schema();
  KnowledgeBase kb(s);
  const auto rep = kb.add(vec(s, "1 * 0_T"));
  const auto qua = kb.add(vec(s, "* 1 1_T"));
  const auto nixon = vec(s, "1 1 ?_T");

  const auto read_only = reason(std::as_const(kb), nixon, {});
  CHECK(read_only.derived_target == 0u);  // tie, first in order
  CHECK(read_only.conflicts.size() == 1);
  CHECK(read_only.bumped.empty());
  CHECK(kb.find(qua)->dynamic_priority == 0);

  // the bump happens before the winner is chosen
  const auto informed = reason(kb, nixon, {}, 1);
  CHECK(informed.bumped == std::vector<RuleId>{qua});
  CHECK(kb.find(qua)->dynamic_priority == 1);
  CHECK(kb.find(rep)->dynamic_priority == 0);
  CHECK(informed.derived_target == 1u);

  ReasonConfig frozen;
  frozen.allow_dynamic_priority_update = false;
  const auto none = reason(kb, nixon, frozen, 0);
  CHECK(none.bumped.empty());
  CHECK(kb.find(rep)->dynamic_priority == 0);
}

TEST_CASE("similarity threshold gates subgoal assertion") {
  const auto s = test::nominal_schema({3, 3, 2, 2});
  KnowledgeBase kb(s);
  kb.add(vec(s, "0 0 1_T *"));       // a2 from a0 and a1
  kb.add(vec(s, "* * 1 1_T"));       // target from a2
  const auto q = vec(s, "0 1 ? ?_T");  // distance 1/2 to the first rule

  ReasonConfig off;
  const auto a = reason(std::as_const(kb), q, off);
  CHECK(a.completed[2].is_dont_know());
  // the target still goes to the nearest rule: d(1, ?) = 1/2
  CHECK(a.derived_target == 1u);
  CHECK(a.trace.back().mechanism == Mechanism::similarity);
  CHECK(a.winner_distance == doctest::Approx(0.5));

  ReasonConfig low;
  low.td_threshold = 0.4;
  CHECK(reason(std::as_const(kb), q, low).completed[2].is_dont_know());

  ReasonConfig high;
  high.td_threshold = 0.5;
  const auto c = reason(std::as_const(kb), q, high);
  CHECK(c.completed[2] == Cell::nominal(1));
  CHECK(c.trace.front().mechanism == Mechanism::similarity);
  CHECK(c.trace.back().mechanism == Mechanism::rule);
  CHECK(c.winner_distance == 0.0);
}

TEST_CASE("fixed point guard") {
  const auto s = test::nominal_schema({3, 3, 2});
  const auto input = vec(s, "0 ? ?_T");
  ReasonOutcome ok;
  ok.completed = vec(s, "0 1 1_T");
  ok.iterations = 2;
  ok.trace = {{1, 1, Cell::nominal(1), RuleId{1}, Mechanism::rule}, {1, 2, Cell::nominal(1), RuleId{2}, Mechanism::rule}};
  CHECK_NOTHROW(fixed_point_guard(input, ok));

  auto too_long = ok;
  too_long.iterations = 3;
  CHECK_THROWS_AS(fixed_point_guard(input, too_long), IterationBoundExceeded);

  auto overwritten = ok;
  overwritten.completed[0] = Cell::nominal(2);
  CHECK_THROWS_AS(fixed_point_guard(input, overwritten), NonMonotonicAssertion);

  auto twice = ok;
  twice.trace.push_back({2, 1, Cell::nominal(1), RuleId{3}, Mechanism::rule});
  CHECK_THROWS_AS(fixed_point_guard(input, twice), NonMonotonicAssertion);
}

TEST_CASE("trace text") {
  const auto kb = load_kb(test::data_path("kb/eyes.kb"));
  const auto out = reason(kb, vec(kb.schema(), "? dry ?_T"), {});
  CHECK(format_trace(kb.schema(), out) ==
        "depth=0 attr=tpr value=low via=1 mech=completion\n"
        "depth=1 attr=fit value=0 via=2 mech=rule\n");
}
