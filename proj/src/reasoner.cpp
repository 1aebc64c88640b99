#include "flare/reasoner.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <tuple>

#include "flare/error.hpp"
#include "flare/kb_io.hpp"
#include "flare/kernels.hpp"
#include "flare/metrics.hpp"

namespace flare {

const char* to_string(Mechanism m) {
  switch (m) {
    case Mechanism::completion:
      return "completion";
    case Mechanism::rule:
      return "rule";
    case Mechanism::similarity:
      return "similarity";
  }
  return "?";
}

Vector complete(const KnowledgeBase& kb, const Vector& v, std::uint64_t seed, std::vector<TraceEntry>* trace) {
  std::mt19937_64 rng(seed);
  Vector out = v;
  const auto rules = kb.rules();
  for (AttrIndex a = 0; a < v.size(); ++a) {
    if (a == v.target || !v[a].asserted() || !kb.schema()[a].is_nominal()) continue;
    std::vector<const StoredRule*> defs;
    for (const auto& r : rules)
      if (r.vector.is_definition && r.vector.target == a && r.target_value() == v[a].index()) defs.push_back(&r);
    if (defs.empty()) continue;
    const StoredRule* d = defs.size() == 1 ? defs.front() : defs[rng() % defs.size()];
    for (AttrIndex i = 0; i < v.size(); ++i) {
      if (i == d->vector.target || !d->vector[i].asserted() || out[i].asserted()) continue;
      out[i] = d->vector[i];
      if (trace) trace->push_back({0, i, out[i], d->id, Mechanism::completion});
    }
  }
  return out;
}

std::vector<const StoredRule*> applicable_rules(const KnowledgeBase& kb, const Vector& v, AttrIndex attr) {
  std::vector<const StoredRule*> out;
  const auto rules = kb.rules();
  for (auto pos : kernels::covering(kb, retarget(v, attr))) out.push_back(&rules[pos]);
  return out;
}

const StoredRule* resolve(std::span<const StoredRule* const> candidates) {
  const StoredRule* best = nullptr;
  auto key = [](const StoredRule* r) {
    return std::make_tuple(specificity(r->vector), r->static_priority(), r->dynamic_priority, r->num_covers);
  };
  for (const StoredRule* r : candidates)
    if (!best || key(r) > key(best)) best = r;
  return best;
}

bool conflicting_defaults(const Schema& schema, const StoredRule& r, const StoredRule& s, const Vector& v) {
  if (r.vector.target != s.vector.target || r.vector.target != v.target) return false;
  return covers(schema, r.vector, v) && covers(schema, s.vector, v) &&
         specificity(r.vector) == specificity(s.vector) && r.static_priority() == s.static_priority() &&
         r.target_value() != s.target_value() && overlaps(schema, r.vector, s.vector);
}

int iteration_bound(const Vector& v) {
  int open = 0;
  for (AttrIndex i = 0; i < v.size(); ++i)
    if (i != v.target && !v[i].asserted()) ++open;
  return open + 1;
}

namespace {

using BumpFn = std::function<void(std::size_t position)>;

std::vector<const StoredRule*> at(const KnowledgeBase& kb, const std::vector<std::size_t>& positions) {
  std::vector<const StoredRule*> out;
  out.reserve(positions.size());
  const auto rules = kb.rules();
  for (auto p : positions) out.push_back(&rules[p]);
  return out;
}

void check_query(const Schema& schema, const Vector& v) {
  if (v.size() != schema.arity())
    throw SchemaMismatch("query arity " + std::to_string(v.size()) + " does not match schema arity " +
                         std::to_string(schema.arity()));
  auto problems = validate_vector(schema, v, false);
  if (!problems.empty()) throw InvalidVector(problems.front());
  if (!v.target_cell().is_dont_know()) throw InvalidVector("query target must be ?");
}

void assert_cell(Vector& w, AttrIndex a, const Cell& value) {
  if (w[a].asserted()) throw NonMonotonicAssertion("attribute " + std::to_string(a) + " asserted twice");
  w[a] = value;
}

ReasonOutcome reason_core(const KnowledgeBase& kb, const Vector& input, const ReasonConfig& cfg,
                          std::optional<ValueIndex> actual, const BumpFn& bump) {
  const Schema& schema = kb.schema();
  check_query(schema, input);
  ReasonOutcome out;
  Vector v = complete(kb, input, cfg.rng_seed, &out.trace);

  if (v.target_cell().asserted()) {
    // Completion reached the goal directly.
    for (const auto& t : out.trace)
      if (t.attribute == v.target) out.winner = t.via;
    if (schema[v.target].is_nominal()) out.derived_target = v.target_cell().index();
    out.completed = std::move(v);
    fixed_point_guard(input, out);
    return out;
  }

  const int bound = iteration_bound(v);
  for (;;) {
    if (++out.iterations > bound)
      throw IterationBoundExceeded("forward chaining exceeded " + std::to_string(bound) + " iterations");
    Vector w = v;
    bool asserted_any = false;
    for (AttrIndex a = 0; a < v.size(); ++a) {
      if (a == v.target || v[a].asserted()) continue;
      const Vector probe = retarget(v, a);
      const StoredRule* winner = nullptr;
      Mechanism mech = Mechanism::rule;
      if (auto cov = kernels::covering(kb, probe); !cov.empty()) {
        winner = resolve(at(kb, cov));
      } else if (cfg.td_threshold > 0.0) {
        auto near = kernels::nearest(kb, probe);
        if (!near.positions.empty() && near.distance <= cfg.td_threshold + kTieTolerance) {
          winner = resolve(at(kb, near.positions));
          mech = Mechanism::similarity;
        }
      }
      if (!winner) continue;
      assert_cell(w, a, winner->vector.target_cell());
      out.trace.push_back({out.iterations, a, w[a], winner->id, mech});
      asserted_any = true;
    }
    v = std::move(w);
    if (!asserted_any) break;
  }

  const auto rules = kb.rules();
  const int depth = out.iterations;
  if (auto cov = kernels::covering(kb, v); !cov.empty()) {
    std::vector<std::size_t> concordant_members;
    for (std::size_t i = 0; i < cov.size(); ++i)
      for (std::size_t j = i + 1; j < cov.size(); ++j) {
        const auto& r = rules[cov[i]];
        const auto& s = rules[cov[j]];
        if (!conflicting_defaults(schema, r, s, v)) continue;
        out.conflicts.emplace_back(r.id, s.id);
        for (auto p : {cov[i], cov[j]})
          if (actual && rules[p].target_value() == *actual &&
              std::find(concordant_members.begin(), concordant_members.end(), p) == concordant_members.end())
            concordant_members.push_back(p);
      }
    if (bump && actual && cfg.allow_dynamic_priority_update) {
      std::sort(concordant_members.begin(), concordant_members.end());
      for (auto p : concordant_members) {
        bump(p);
        out.bumped.push_back(rules[p].id);
      }
    }
    const StoredRule* winner = resolve(at(kb, cov));
    out.winner = winner->id;
    out.winner_distance = distance(schema, winner->vector, v);
    assert_cell(v, v.target, winner->vector.target_cell());
    out.trace.push_back({depth, v.target, v.target_cell(), winner->id, Mechanism::rule});
  } else if (auto near = kernels::nearest(kb, v); !near.positions.empty()) {
    const StoredRule* winner = resolve(at(kb, near.positions));
    out.winner = winner->id;
    out.winner_distance = near.distance;
    assert_cell(v, v.target, winner->vector.target_cell());
    out.trace.push_back({depth, v.target, v.target_cell(), winner->id, Mechanism::similarity});
  }
  if (v.target_cell().asserted()) out.derived_target = v.target_cell().index();
  out.completed = std::move(v);
  fixed_point_guard(input, out);
  return out;
}

}  // namespace

ReasonOutcome reason(const KnowledgeBase& kb, const Vector& v, const ReasonConfig& cfg) {
  return reason_core(kb, v, cfg, std::nullopt, {});
}

ReasonOutcome reason(KnowledgeBase& kb, const Vector& v, const ReasonConfig& cfg,
                     std::optional<ValueIndex> actual_target) {
  auto rules = kb.rules();
  return reason_core(kb, v, cfg, actual_target, [rules](std::size_t p) { ++rules[p].dynamic_priority; });
}

void fixed_point_guard(const Vector& input, const ReasonOutcome& outcome) {
  if (outcome.iterations > iteration_bound(input))
    throw IterationBoundExceeded("forward chaining ran " + std::to_string(outcome.iterations) +
                                 " iterations, bound is " + std::to_string(iteration_bound(input)));
  const Vector& done = outcome.completed;
  if (done.size() != input.size()) throw NonMonotonicAssertion("completed vector changed arity");
  for (AttrIndex i = 0; i < input.size(); ++i)
    if (input[i].asserted() && !(done[i] == input[i]))
      throw NonMonotonicAssertion("input cell " + std::to_string(i) + " was overwritten");
  std::vector<bool> seen(input.size(), false);
  for (const auto& t : outcome.trace) {
    if (t.attribute >= input.size() || input[t.attribute].asserted() || seen[t.attribute])
      throw NonMonotonicAssertion("attribute " + std::to_string(t.attribute) + " asserted twice");
    seen[t.attribute] = true;
    if (!(done[t.attribute] == t.value)) throw NonMonotonicAssertion("trace disagrees with result");
  }
}

std::string format_trace(const Schema& schema, const ReasonOutcome& outcome) {
  std::string out;
  for (const auto& t : outcome.trace) {
    out += "depth=" + std::to_string(t.depth) + " attr=" + schema[t.attribute].name +
           " value=" + format_cell(schema[t.attribute], t.value) + " via=" + std::to_string(t.via.value) +
           " mech=" + to_string(t.mechanism) + '\n';
  }
  return out;
}

}  // namespace flare
