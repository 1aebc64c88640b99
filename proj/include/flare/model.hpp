#pragma once

// Attribute-value data model: schemas, cells, vectors, stored rules and the
// knowledge base container every other module operates on.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace flare {

using AttrIndex = std::size_t;
using ValueIndex = std::size_t;

inline constexpr double kDefaultDeltaFraction = 0.05;

enum class AttrKind : std::uint8_t { nominal, linear };

struct AttributeDef {
  std::string name;
  AttrKind kind = AttrKind::nominal;
  std::vector<std::string> values;  // nominal only
  double min = 0.0;                 // linear only
  double max = 1.0;
  double delta_fraction = kDefaultDeltaFraction;

  static AttributeDef nominal(std::string name, std::vector<std::string> values);
  static AttributeDef linear(std::string name, double min, double max,
                             double delta_fraction = kDefaultDeltaFraction);

  bool is_nominal() const noexcept { return kind == AttrKind::nominal; }
  bool is_linear() const noexcept { return kind == AttrKind::linear; }
  double range() const noexcept { return max - min; }
  /// Absolute tolerance under which two linear values count as equal.
  double delta() const noexcept { return delta_fraction * range(); }
  std::optional<ValueIndex> find_value(std::string_view value) const;

  friend bool operator==(const AttributeDef&, const AttributeDef&) = default;
};

/// Ordered attribute universe. Immutable after construction except for the
/// linear tolerance override used by the evaluation harness.
class Schema {
 public:
  Schema() = default;
  explicit Schema(std::vector<AttributeDef> attributes);

  std::size_t arity() const noexcept { return attributes_.size(); }
  const AttributeDef& operator[](AttrIndex i) const { return attributes_[i]; }
  const std::vector<AttributeDef>& attributes() const noexcept { return attributes_; }

  std::optional<AttrIndex> find(std::string_view name) const;
  /// Throws SchemaMismatch when the attribute does not exist.
  AttrIndex index_of(std::string_view name) const;

  void set_delta_fraction(double fraction);

  friend bool operator==(const Schema&, const Schema&) = default;

 private:
  std::vector<AttributeDef> attributes_;
};

/// One attribute slot: an asserted value, don't-care (⋆) or don't-know (?).
/// Nominal values are stored as their index in the attribute's value list.
class Cell {
 public:
  enum class Kind : std::uint8_t { asserted, dont_care, dont_know };

  constexpr Cell() = default;

  static constexpr Cell dont_care() noexcept { return Cell{Kind::dont_care, 0.0}; }
  static constexpr Cell dont_know() noexcept { return Cell{Kind::dont_know, 0.0}; }
  static constexpr Cell nominal(ValueIndex index) noexcept {
    return Cell{Kind::asserted, static_cast<double>(index)};
  }
  static constexpr Cell linear(double value) noexcept { return Cell{Kind::asserted, value}; }

  constexpr Kind kind() const noexcept { return kind_; }
  constexpr bool asserted() const noexcept { return kind_ == Kind::asserted; }
  constexpr bool is_dont_care() const noexcept { return kind_ == Kind::dont_care; }
  constexpr bool is_dont_know() const noexcept { return kind_ == Kind::dont_know; }

  constexpr double value() const noexcept { return value_; }
  constexpr ValueIndex index() const noexcept { return static_cast<ValueIndex>(value_); }

  friend constexpr bool operator==(const Cell&, const Cell&) = default;

 private:
  constexpr Cell(Kind kind, double value) : kind_(kind), value_(value) {}

  Kind kind_ = Kind::dont_care;
  double value_ = 0.0;
};

/// A fixed-arity row of cells with a designated target attribute. Examples,
/// precepts, rules and queries are all vectors.
struct Vector {
  std::vector<Cell> cells;
  AttrIndex target = 0;
  bool is_definition = false;
  int static_priority = 0;

  std::size_t size() const noexcept { return cells.size(); }
  Cell& operator[](AttrIndex i) { return cells[i]; }
  const Cell& operator[](AttrIndex i) const { return cells[i]; }
  const Cell& target_cell() const { return cells[target]; }

  friend bool operator==(const Vector&, const Vector&) = default;
};

/// Copy of v whose target is moved to attr; the new target cell becomes ?.
Vector retarget(const Vector& v, AttrIndex attr);

struct RuleId {
  std::uint64_t value = 0;
  friend constexpr auto operator<=>(RuleId, RuleId) = default;
};

/// A vector plus the learning metadata kept with it in a knowledge base.
/// The target cell of `vector` always holds the effective target value.
struct StoredRule {
  RuleId id;
  Vector vector;
  int dynamic_priority = 0;
  int num_covers = 0;
  std::vector<int> counters;  // one entry per value of the target attribute

  int static_priority() const noexcept { return vector.static_priority; }
  ValueIndex target_value() const { return vector.target_cell().index(); }
};

/// Fresh rule for an asserted-target vector: counters all zero except the
/// vector's own target value, which starts at one.
StoredRule make_rule(const Schema& schema, Vector v);

/// Argmax of the counters. Ties keep the value currently in effect.
ValueIndex effective_target_value(const StoredRule& rule);

/// Adds one observation of `value` and updates the rule's effective target.
void record_observation(StoredRule& rule, ValueIndex value);

/// Every invariant violation of v against the schema; empty when valid.
/// Queries may skip the premise check: an all-⋆ query is odd but harmless.
std::vector<std::string> validate_vector(const Schema& schema, const Vector& v,
                                         bool require_premise = true);

/// Violations of a stored rule: those of its vector plus the rule-only ones
/// (nominal target, counters shape, effective value is an argmax).
std::vector<std::string> validate_rule(const Schema& schema, const StoredRule& rule);

class KnowledgeBase {
 public:
  KnowledgeBase() = default;
  explicit KnowledgeBase(Schema schema) : schema_(std::move(schema)) {}

  const Schema& schema() const noexcept { return schema_; }
  Schema& schema() noexcept { return schema_; }

  std::span<const StoredRule> rules() const noexcept { return rules_; }
  std::span<StoredRule> rules() noexcept { return rules_; }
  std::size_t size() const noexcept { return rules_.size(); }
  bool empty() const noexcept { return rules_.empty(); }

  /// Appends a rule after validating it; assigns and returns a fresh id.
  /// Throws InvalidVector (e.g. all-⋆ premise).
  RuleId insert(StoredRule rule);
  RuleId add(Vector v) { return insert(make_rule(schema_, std::move(v))); }

  /// Replaces the rule `old` in place (same position, fresh id).
  RuleId replace(RuleId old, StoredRule rule);

  StoredRule* find(RuleId id);
  const StoredRule* find(RuleId id) const;
  std::optional<std::size_t> position(RuleId id) const;

 private:
  void check(const StoredRule& rule) const;

  Schema schema_;
  std::vector<StoredRule> rules_;
  std::uint64_t next_id_ = 1;
};

}  // namespace flare
