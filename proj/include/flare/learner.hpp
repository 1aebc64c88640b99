#pragma once

// Learning: reason about an incoming vector, then adapt the knowledge base
// around the vector's closest match.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "flare/model.hpp"
#include "flare/reasoner.hpp"

namespace flare {

enum class AdaptAction : std::uint8_t {
  stored_first,
  counter_update,
  covered_by_match,
  replaced_match,
  generalized_match,
  generalized_input,
  stored_exception,
  stored_default,
};
const char* to_string(AdaptAction a);

struct AdaptReport {
  AdaptAction action = AdaptAction::stored_default;
  std::optional<RuleId> match;
  /// Rule created or rewritten by this step, if any.
  std::optional<RuleId> stored;
  std::optional<ValueIndex> predicted_target;
  ValueIndex actual_target = 0;
  /// Attribute set to ⋆ by a generalization.
  std::optional<AttrIndex> dropped;
};

/// Distance-minimizing rule with the same target attribute, ties resolved by
/// priority. Null when no rule shares the target attribute.
const StoredRule* closest_match(const KnowledgeBase& kb, const Vector& v_plus);

/// Cellwise equality of premises: ⋆=⋆, ?=?, nominal exact, linear within δ.
bool vectors_equal(const Schema& schema, const Vector& a, const Vector& b);

/// The single attribute a drop-the-condition generalization would remove,
/// or nullopt when the five generalization conditions do not all hold.
std::optional<AttrIndex> can_generalize(const Schema& schema, const Vector& a, const Vector& b);

/// v with cell attr set to ⋆. Throws WouldCoverEverything when v has a
/// single non-⋆ premise cell left.
Vector drop_condition(const Vector& v, AttrIndex attr);

/// One pass of the adapting function. The target cell of v⁺ is set to
/// `actual_target` before anything is compared or stored.
AdaptReport adapt(KnowledgeBase& kb, Vector v_plus, ValueIndex actual_target);

struct LearnResult {
  ReasonOutcome reasoning;
  AdaptReport adapt;
};

/// Reason about v with its target hidden, then adapt with the actual value.
/// The actual value is taken from v's target cell, which must be asserted.
LearnResult learn(KnowledgeBase& kb, const Vector& v, const ReasonConfig& cfg);

/// `action=<branch> match=<id> stored=<id> ...` log line.
std::string format_report(const Schema& schema, const Vector& v, const LearnResult& result);

}  // namespace flare
