#pragma once

// Generating domain precepts from general rules: learn the rules into a
// scratch knowledge base, reason from a facts vector, keep the conclusion.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "flare/model.hpp"
#include "flare/reasoner.hpp"

namespace flare {

struct Precept {
  Vector vector;
  /// Distance of the rule that fixed the target; above zero means the
  /// conclusion came from similarity rather than a covering rule.
  double distance = 0.0;
};

struct PreceptOptions {
  /// Keep cells inferred along the chain instead of resetting them to ⋆.
  bool keep_intermediates = false;
  int static_priority = 0;
};

/// `facts` holds the known cells (others ⋆); its target cell is ignored and
/// `target` names the attribute to conclude. Returns at most one precept.
std::vector<Precept> generate_precepts(const Schema& schema, std::span<const Vector> general_rules,
                                       const Vector& facts, AttrIndex target, const ReasonConfig& cfg,
                                       const PreceptOptions& options = {});

/// Precept in rule-line form, with a distance comment when it was reached
/// by similarity.
std::string format_precept(const Schema& schema, const Precept& p);

}  // namespace flare
