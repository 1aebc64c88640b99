#include "flare/precepts.hpp"

#include <utility>

#include "flare/error.hpp"
#include "flare/kb_io.hpp"
#include "flare/learner.hpp"

namespace flare {

std::vector<Precept> generate_precepts(const Schema& schema, std::span<const Vector> general_rules,
                                       const Vector& facts, AttrIndex target, const ReasonConfig& cfg,
                                       const PreceptOptions& options) {
  if (facts.size() != schema.arity() || target >= schema.arity())
    throw SchemaMismatch("facts vector does not match the schema");

  // General rules are learned as given; approximate reasoning only applies
  // when reasoning from the facts.
  ReasonConfig learn_cfg = cfg;
  learn_cfg.td_threshold = 0.0;
  KnowledgeBase scratch(schema);
  for (const auto& rule : general_rules) learn(scratch, rule, learn_cfg);

  Vector query = facts;
  query.target = target;
  query[target] = Cell::dont_know();
  query.is_definition = false;
  query.static_priority = 0;
  const ReasonOutcome outcome = reason(std::as_const(scratch), query, cfg);
  if (!outcome.derived_target) return {};

  Precept p;
  p.vector = options.keep_intermediates ? outcome.completed : query;
  p.vector[target] = outcome.completed[target];
  p.vector.is_definition = false;
  p.vector.static_priority = options.static_priority;
  if (options.keep_intermediates) {
    // Leftover ? cells carry no information in a stored precept.
    for (AttrIndex i = 0; i < p.vector.size(); ++i)
      if (p.vector[i].is_dont_know()) p.vector[i] = Cell::dont_care();
  }
  p.distance = outcome.winner_distance;
  return {p};
}

std::string format_precept(const Schema& schema, const Precept& p) {
  std::string out = format_vector(schema, p.vector);
  if (p.distance > 0.0) out += "  # distance=" + format_number(p.distance);
  return out;
}

}  // namespace flare
