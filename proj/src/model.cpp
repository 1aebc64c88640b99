#include "flare/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "flare/error.hpp"

namespace flare {

AttributeDef AttributeDef::nominal(std::string name, std::vector<std::string> values) {
  AttributeDef a;
  a.name = std::move(name);
  a.kind = AttrKind::nominal;
  a.values = std::move(values);
  return a;
}

AttributeDef AttributeDef::linear(std::string name, double min, double max, double delta_fraction) {
  AttributeDef a;
  a.name = std::move(name);
  a.kind = AttrKind::linear;
  a.min = min;
  a.max = max;
  a.delta_fraction = delta_fraction;
  return a;
}

std::optional<ValueIndex> AttributeDef::find_value(std::string_view value) const {
  auto it = std::find(values.begin(), values.end(), value);
  if (it == values.end()) return std::nullopt;
  return static_cast<ValueIndex>(it - values.begin());
}

Schema::Schema(std::vector<AttributeDef> attributes) : attributes_(std::move(attributes)) {
  if (attributes_.size() < 2) throw SchemaMismatch("schema needs at least two attributes");
  std::set<std::string> names;
  for (const auto& a : attributes_) {
    if (a.name.empty()) throw SchemaMismatch("attribute with empty name");
    if (!names.insert(a.name).second) throw SchemaMismatch("duplicate attribute '" + a.name + "'");
    if (a.is_nominal()) {
      if (a.values.empty()) throw SchemaMismatch("nominal attribute '" + a.name + "' has no values");
      std::set<std::string> seen;
      for (const auto& v : a.values) {
        if (v.empty()) throw SchemaMismatch("empty value name in '" + a.name + "'");
        if (!seen.insert(v).second)
          throw SchemaMismatch("duplicate value '" + v + "' in '" + a.name + "'");
      }
    } else {
      if (!(a.min < a.max)) throw SchemaMismatch("linear attribute '" + a.name + "' needs min < max");
      if (!(a.delta_fraction > 0.0) || a.delta_fraction > 1.0)
        throw SchemaMismatch("linear attribute '" + a.name + "' needs delta fraction in (0,1]");
    }
  }
}

std::optional<AttrIndex> Schema::find(std::string_view name) const {
  for (AttrIndex i = 0; i < attributes_.size(); ++i)
    if (attributes_[i].name == name) return i;
  return std::nullopt;
}

AttrIndex Schema::index_of(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw SchemaMismatch("unknown attribute '" + std::string(name) + "'");
}

void Schema::set_delta_fraction(double fraction) {
  if (!(fraction > 0.0) || fraction > 1.0) throw SchemaMismatch("delta fraction must be in (0,1]");
  for (auto& a : attributes_)
    if (a.is_linear()) a.delta_fraction = fraction;
}

Vector retarget(const Vector& v, AttrIndex attr) {
  Vector out = v;
  out.target = attr;
  out.cells[attr] = Cell::dont_know();
  return out;
}

StoredRule make_rule(const Schema& schema, Vector v) {
  if (v.target >= v.size() || !v.target_cell().asserted())
    throw InvalidVector("a stored rule needs an asserted target");
  const auto& attr = schema[v.target];
  if (!attr.is_nominal()) throw InvalidVector("rule target '" + attr.name + "' must be nominal");
  StoredRule r;
  r.counters.assign(attr.values.size(), 0);
  const ValueIndex t = v.target_cell().index();
  if (t >= r.counters.size()) throw InvalidVector("target value out of domain");
  r.counters[t] = 1;
  r.vector = std::move(v);
  return r;
}

ValueIndex effective_target_value(const StoredRule& rule) {
  const ValueIndex current = rule.target_value();
  const int best = *std::max_element(rule.counters.begin(), rule.counters.end());
  if (current < rule.counters.size() && rule.counters[current] == best) return current;
  return static_cast<ValueIndex>(
      std::find(rule.counters.begin(), rule.counters.end(), best) - rule.counters.begin());
}

void record_observation(StoredRule& rule, ValueIndex value) {
  if (value >= rule.counters.size()) throw DomainError("counter index out of domain");
  ++rule.counters[value];
  rule.vector.cells[rule.vector.target] = Cell::nominal(effective_target_value(rule));
}

std::vector<std::string> validate_vector(const Schema& schema, const Vector& v,
                                         bool require_premise) {
  std::vector<std::string> out;
  if (v.size() != schema.arity()) {
    out.push_back("arity " + std::to_string(v.size()) + " does not match schema arity " +
                  std::to_string(schema.arity()));
    return out;
  }
  if (v.target >= v.size()) {
    out.push_back("target index out of range");
    return out;
  }
  if (v.static_priority < 0) out.push_back("negative static priority");
  bool any_premise = false;
  for (AttrIndex i = 0; i < v.size(); ++i) {
    const Cell& c = v[i];
    const auto& a = schema[i];
    if (c.asserted()) {
      if (a.is_nominal()) {
        if (c.value() < 0 || c.value() != std::floor(c.value()) || c.index() >= a.values.size())
          out.push_back("attribute '" + a.name + "': value out of domain");
      } else if (!std::isfinite(c.value()) || c.value() < a.min || c.value() > a.max) {
        out.push_back("attribute '" + a.name + "': value out of domain");
      }
    }
    if (i == v.target) {
      if (c.is_dont_care()) out.push_back("target attribute '" + a.name + "' is don't-care");
    } else if (!c.is_dont_care()) {
      any_premise = true;
    }
  }
  if (require_premise && !any_premise) out.push_back("all premise cells are don't-care: vector covers every vector");
  return out;
}

std::vector<std::string> validate_rule(const Schema& schema, const StoredRule& rule) {
  auto out = validate_vector(schema, rule.vector);
  if (!out.empty()) return out;
  const auto& t = schema[rule.vector.target];
  if (!t.is_nominal()) {
    out.push_back("rule target '" + t.name + "' must be nominal");
    return out;
  }
  if (!rule.vector.target_cell().asserted()) out.push_back("rule target is not asserted");
  if (rule.counters.size() != t.values.size()) {
    out.push_back("counters need one entry per target value");
    return out;
  }
  int sum = 0;
  for (int c : rule.counters) {
    if (c < 0) out.push_back("negative counter");
    sum += c;
  }
  if (sum < 1) out.push_back("counters sum to zero");
  if (rule.dynamic_priority < 0) out.push_back("negative dynamic priority");
  if (rule.num_covers < 0) out.push_back("negative num_covers");
  if (out.empty() && rule.vector.target_cell().asserted()) {
    const int best = *std::max_element(rule.counters.begin(), rule.counters.end());
    if (rule.counters[rule.target_value()] != best)
      out.push_back("target value is not an argmax of the counters");
  }
  return out;
}

void KnowledgeBase::check(const StoredRule& rule) const {
  auto problems = validate_rule(schema_, rule);
  if (!problems.empty()) throw InvalidVector(problems.front());
}

RuleId KnowledgeBase::insert(StoredRule rule) {
  check(rule);
  rule.id = RuleId{next_id_++};
  rules_.push_back(std::move(rule));
  return rules_.back().id;
}

RuleId KnowledgeBase::replace(RuleId old, StoredRule rule) {
  auto pos = position(old);
  if (!pos) throw Error("replace: unknown rule id " + std::to_string(old.value));
  check(rule);
  rule.id = RuleId{next_id_++};
  rules_[*pos] = std::move(rule);
  return rules_[*pos].id;
}

std::optional<std::size_t> KnowledgeBase::position(RuleId id) const {
  for (std::size_t i = 0; i < rules_.size(); ++i)
    if (rules_[i].id == id) return i;
  return std::nullopt;
}

StoredRule* KnowledgeBase::find(RuleId id) {
  auto pos = position(id);
  return pos ? &rules_[*pos] : nullptr;
}

const StoredRule* KnowledgeBase::find(RuleId id) const {
  auto pos = position(id);
  return pos ? &rules_[*pos] : nullptr;
}

}  // namespace flare
