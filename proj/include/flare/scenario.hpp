#pragma once

// Scenario files: a schema, training vectors learned in file order and
// queries with expected conclusions, possibly interleaved.
//
//   [config]
//   td = 0
//   seed = 0
//   dynamic = true
//   [schema]
//   republican : nominal(0,1)
//   ...
//   [train]
//   1 * 0_T
//   [query]
//   1 1 ?_T            # nixon
//   expect target=1
//   expect quaker=1
//
// A [rules] section inserts stored rules verbatim, bypassing learning.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "flare/model.hpp"
#include "flare/reasoner.hpp"

namespace flare {

struct Expectation {
  AttrIndex attribute = 0;
  /// `target=` rather than a named attribute; compares the derived target.
  bool on_target = false;
  Cell value;
  std::size_t line = 0;
};

struct ScenarioStep {
  enum class Kind { train, insert, query };
  Kind kind = Kind::train;
  StoredRule rule;  // vector and, for insert, its metadata
  std::string label;
  std::vector<Expectation> expectations;
  std::size_t line = 0;
};

struct Scenario {
  std::string name;
  Schema schema;
  ReasonConfig config;
  std::vector<ScenarioStep> steps;
};

Scenario parse_scenario(std::string_view text, std::string name = "scenario");
Scenario load_scenario(const std::filesystem::path& path);

struct QueryResult {
  std::string label;
  std::size_t line = 0;
  Vector query;
  ReasonOutcome outcome;
  std::vector<std::string> failures;
  bool passed() const { return failures.empty(); }
};

struct ScenarioReport {
  std::string name;
  std::vector<QueryResult> queries;
  std::size_t kb_size = 0;
  bool passed() const;
};

/// Fresh KB; steps run in file order. Queries use read-only reasoning.
ScenarioReport run_scenario(const Scenario& s);

/// One `scenario=.. query=.. status=PASS|FAIL ...` line per query, each
/// followed by its trace when `with_trace` is set.
std::string format_scenario_report(const Scenario& s, const ScenarioReport& r, bool with_trace = false);

}  // namespace flare
