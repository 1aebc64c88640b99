#pragma once

// Reasoning: completion of definitions, forward chaining over subgoals and
// assertion of the target by rule application or similarity.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "flare/model.hpp"

namespace flare {

struct ReasonConfig {
  /// T_D. Zero disables similarity-based subgoal assertion.
  double td_threshold = 0.0;
  bool allow_dynamic_priority_update = true;
  std::uint64_t rng_seed = 0;
};

enum class Mechanism : std::uint8_t { completion, rule, similarity };
const char* to_string(Mechanism m);

struct TraceEntry {
  int depth = 0;
  AttrIndex attribute = 0;
  Cell value;
  RuleId via;
  Mechanism mechanism = Mechanism::rule;
};

struct ReasonOutcome {
  /// v⁺: the input with every deduced cell filled in, target included.
  Vector completed;
  /// Derived target value; nullopt stands for ?.
  std::optional<ValueIndex> derived_target;
  std::optional<RuleId> winner;
  double winner_distance = 0.0;
  std::vector<TraceEntry> trace;
  std::vector<std::pair<RuleId, RuleId>> conflicts;
  /// Passes through the forward-chaining loop, the final unproductive one included.
  int iterations = 0;
  /// Rules whose dynamic priority was incremented by this call.
  std::vector<RuleId> bumped;
};

/// Step 1 of reasoning. Copies cells of matching definitions into the
/// non-asserted cells of v, first copy winning. `trace` may be null.
Vector complete(const KnowledgeBase& kb, const Vector& v, std::uint64_t seed,
                std::vector<TraceEntry>* trace = nullptr);

/// Rules concluding `attr` that cover v once v is viewed with target `attr`,
/// in knowledge-base order.
std::vector<const StoredRule*> applicable_rules(const KnowledgeBase& kb, const Vector& v, AttrIndex attr);

/// Priority scheme: specificity, static priority, dynamic priority,
/// num_covers, then the first candidate in the given order.
const StoredRule* resolve(std::span<const StoredRule* const> candidates);

/// Five-condition conflicting-defaults test over v.
bool conflicting_defaults(const Schema& schema, const StoredRule& r, const StoredRule& s, const Vector& v);

/// Read-only reasoning. The target cell of v must be ?.
ReasonOutcome reason(const KnowledgeBase& kb, const Vector& v, const ReasonConfig& cfg);

/// Reasoning with the actual target known: conflicting defaults found at the
/// target step get their concordant member's dynamic priority incremented
/// before the winner is chosen.
ReasonOutcome reason(KnowledgeBase& kb, const Vector& v, const ReasonConfig& cfg,
                     std::optional<ValueIndex> actual_target);

/// Checks the loop bound and the write-once rule on a finished outcome
/// against its input. Throws IterationBoundExceeded or NonMonotonicAssertion.
void fixed_point_guard(const Vector& input, const ReasonOutcome& outcome);

/// Largest iteration count forward chaining can need for v.
int iteration_bound(const Vector& v);

/// One line per trace entry:
/// depth=<d> attr=<name> value=<v> via=<id> mech=<mechanism>
std::string format_trace(const Schema& schema, const ReasonOutcome& outcome);

}  // namespace flare
