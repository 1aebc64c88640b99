#pragma once

// Restricted first-order clauses to attribute-value vectors and back.
//
// Clause files hold one clause per line:
//   block(A)                              ground fact
//   ~on_table(A)                          negated ground fact
//   color(B, red)                         valued ground fact
//   block(x) & heavy(x) => on_table(x)    implication over one variable
//   tear_rate(x, low) => eyes(x, dry)
//   order: label, block, heavy, on_table  optional attribute order
// A variable is a single lowercase letter, optionally followed by digits.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "flare/model.hpp"

namespace flare {

struct Literal {
  std::string predicate;
  bool negated = false;
  /// Variable or constant the predicate applies to.
  std::string subject;
  /// Second argument of p(x, C).
  std::optional<std::string> value;
  std::size_t column = 0;
};

enum class ClauseKind { ground_fact, implication };

struct Clause {
  ClauseKind kind = ClauseKind::implication;
  std::vector<Literal> premise;
  Literal conclusion;
  /// Instance named by a ground fact.
  std::string constant;
  std::size_t line = 0;
};

struct ClauseFile {
  std::vector<Clause> clauses;
  std::vector<std::string> order;
  std::size_t order_line = 0;
};

bool is_variable(std::string_view s);

/// Throws SyntaxError or UnsupportedClause with line and column.
ClauseFile parse_clauses(std::string_view text);

struct TranslateOptions {
  /// Give vectors built from ground facts static priority 1.
  bool instance_priority = false;
  /// Fold all ground facts about one constant into a single definition
  /// vector concluding label = constant.
  bool facts_as_definitions = false;
};

enum class AttrRole { boolean, multi_valued, label };

struct Translation {
  Schema schema;
  std::vector<AttrRole> roles;
  std::vector<Vector> vectors;
};

/// Throws InconsistentArity when a predicate is used with both arities.
Translation translate(const ClauseFile& clauses, const TranslateOptions& options = {});

/// Clause text for a vector of a translation; ground facts come back as
/// facts. Vectors containing ? cells have no clause form.
std::string to_clause_text(const Translation& t, const Vector& v);

/// Expands a rule whose premises carry value sets into one vector per
/// combination, first attribute varying slowest:
///   stimulus={1,0,2} & duration=0 => media=3 p=1
std::vector<Vector> expand_internal_disjunction(const Schema& schema, std::string_view rule_text);

}  // namespace flare
