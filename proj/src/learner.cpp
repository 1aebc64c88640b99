#include "flare/learner.hpp"

#include <algorithm>
#include <cstdlib>

#include "flare/error.hpp"
#include "flare/kb_io.hpp"
#include "flare/kernels.hpp"
#include "flare/metrics.hpp"

namespace flare {

const char* to_string(AdaptAction a) {
  switch (a) {
    case AdaptAction::stored_first:
      return "stored_first";
    case AdaptAction::counter_update:
      return "counter_update";
    case AdaptAction::covered_by_match:
      return "covered_by_match";
    case AdaptAction::replaced_match:
      return "replaced_match";
    case AdaptAction::generalized_match:
      return "generalized_match";
    case AdaptAction::generalized_input:
      return "generalized_input";
    case AdaptAction::stored_exception:
      return "stored_exception";
    case AdaptAction::stored_default:
      return "stored_default";
  }
  return "?";
}

const StoredRule* closest_match(const KnowledgeBase& kb, const Vector& v_plus) {
  auto near = kernels::nearest(kb, v_plus);
  if (near.positions.empty()) return nullptr;
  const auto rules = kb.rules();
  std::vector<const StoredRule*> cands;
  for (auto p : near.positions) cands.push_back(&rules[p]);
  return resolve(cands);
}

namespace {

bool cells_equal(const Cell& x, const Cell& y, const AttributeDef& attr) {
  if (x.kind() != y.kind()) return false;
  return !x.asserted() || values_equal(x, y, attr);
}

}  // namespace

bool vectors_equal(const Schema& schema, const Vector& a, const Vector& b) {
  if (a.target != b.target || a.size() != b.size()) return false;
  for (AttrIndex i = 0; i < a.size(); ++i)
    if (i != a.target && !cells_equal(a[i], b[i], schema[i])) return false;
  return true;
}

std::optional<AttrIndex> can_generalize(const Schema& schema, const Vector& a, const Vector& b) {
  if (a.target != b.target || a.size() != b.size()) return std::nullopt;
  if (!a.target_cell().asserted() || !b.target_cell().asserted() || !concordant(a, b)) return std::nullopt;
  std::optional<AttrIndex> diff;
  for (AttrIndex i = 0; i < a.size(); ++i) {
    if (i == a.target || cells_equal(a[i], b[i], schema[i])) continue;
    if (diff) return std::nullopt;
    diff = i;
  }
  if (!diff || !schema[*diff].is_nominal()) return std::nullopt;
  const int sa = specificity(a);
  const int sb = specificity(b);
  if (std::abs(sa - sb) > 1 || std::max(sa, sb) <= 1) return std::nullopt;
  return diff;
}

Vector drop_condition(const Vector& v, AttrIndex attr) {
  if (attr >= v.size() || attr == v.target) throw InvalidVector("cannot drop the target attribute");
  if (v[attr].is_dont_care()) throw InvalidVector("attribute is already don't-care");
  if (num_asserted(v) <= 1) throw WouldCoverEverything("dropping the last premise condition");
  Vector out = v;
  out[attr] = Cell::dont_care();
  return out;
}

AdaptReport adapt(KnowledgeBase& kb, Vector v, ValueIndex actual) {
  const Schema& schema = kb.schema();
  if (v.target >= v.size() || !schema[v.target].is_nominal() ||
      actual >= schema[v.target].values.size())
    throw InvalidVector("adapt needs a nominal target value");
  v[v.target] = Cell::nominal(actual);

  AdaptReport rep;
  rep.actual_target = actual;
  if (kb.empty()) {
    rep.action = AdaptAction::stored_first;
    rep.stored = kb.add(std::move(v));
    return rep;
  }
  const StoredRule* match = closest_match(kb, v);
  if (!match) {
    rep.action = AdaptAction::stored_default;
    rep.stored = kb.add(std::move(v));
    return rep;
  }
  const RuleId mid = match->id;
  rep.match = mid;
  StoredRule& m = *kb.find(mid);

  const bool same_value = m.target_value() == actual;
  if (vectors_equal(schema, m.vector, v)) {
    record_observation(m, actual);
    rep.action = AdaptAction::counter_update;
    return rep;
  }
  if (same_value && covers(schema, m.vector, v)) {
    ++m.num_covers;
    rep.action = AdaptAction::covered_by_match;
    return rep;
  }
  if (same_value && covers(schema, v, m.vector)) {
    StoredRule r = make_rule(schema, std::move(v));
    r.num_covers = m.num_covers + 1;
    rep.action = AdaptAction::replaced_match;
    rep.stored = kb.replace(mid, std::move(r));
    return rep;
  }
  if (auto attr = can_generalize(schema, m.vector, v)) {
    rep.dropped = attr;
    const int sv = specificity(v);
    const int sm = specificity(m.vector);
    const int p = std::max(m.static_priority(), v.static_priority);
    const bool def = m.vector.is_definition && v.is_definition;
    if (sv > sm && sm > 1) {
      m.vector = drop_condition(m.vector, *attr);
      m.vector.static_priority = p;
      m.vector.is_definition = def;
      rep.action = AdaptAction::generalized_match;
      rep.stored = mid;
      return rep;
    }
    if (sv > 1) {
      Vector g = drop_condition(v, *attr);
      g.static_priority = p;
      g.is_definition = def;
      StoredRule r = make_rule(schema, std::move(g));
      r.num_covers = m.num_covers;
      rep.action = AdaptAction::generalized_input;
      rep.stored = kb.replace(mid, std::move(r));
      return rep;
    }
    rep.dropped.reset();
    rep.action = AdaptAction::stored_default;
    rep.stored = kb.add(std::move(v));
    return rep;
  }
  rep.action = covers(schema, m.vector, v) ? AdaptAction::stored_exception : AdaptAction::stored_default;
  rep.stored = kb.add(std::move(v));
  return rep;
}

LearnResult learn(KnowledgeBase& kb, const Vector& v, const ReasonConfig& cfg) {
  const Schema& schema = kb.schema();
  if (v.size() != schema.arity())
    throw SchemaMismatch("vector arity " + std::to_string(v.size()) + " does not match schema arity " +
                         std::to_string(schema.arity()));
  auto problems = validate_vector(schema, v);
  if (!problems.empty()) throw InvalidVector(problems.front());
  if (!v.target_cell().asserted()) throw TargetUnasserted("a training vector needs its target value");
  if (!schema[v.target].is_nominal()) throw InvalidVector("training target must be nominal");
  const ValueIndex actual = v.target_cell().index();

  Vector query = v;
  query[query.target] = Cell::dont_know();
  LearnResult out;
  out.reasoning = reason(kb, query, cfg, actual);
  Vector v_plus = kb.empty() ? v : out.reasoning.completed;
  out.adapt = adapt(kb, std::move(v_plus), actual);
  out.adapt.predicted_target = out.reasoning.derived_target;
  return out;
}

std::string format_report(const Schema& schema, const Vector& v, const LearnResult& result) {
  const auto& a = result.adapt;
  const auto& tattr = schema[v.target];
  auto id = [](const std::optional<RuleId>& r) { return r ? std::to_string(r->value) : std::string("-"); };
  std::string out = std::string("action=") + to_string(a.action) + " match=" + id(a.match) +
                    " stored=" + id(a.stored);
  out += " predicted=" + (a.predicted_target ? tattr.values[*a.predicted_target] : std::string("?"));
  out += " actual=" + tattr.values[a.actual_target];
  if (a.dropped) out += " dropped=" + schema[*a.dropped].name;
  if (!result.reasoning.bumped.empty()) {
    out += " dp+=";
    for (std::size_t i = 0; i < result.reasoning.bumped.size(); ++i)
      out += (i ? "," : "") + std::to_string(result.reasoning.bumped[i].value);
  }
  return out;
}

}  // namespace flare
