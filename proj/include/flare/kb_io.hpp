#pragma once

// Line-oriented text format shared by knowledge bases, datasets, scenarios
// and precept files.
//
//   [schema]
//   situation : nominal(schematics,conversation,photograph)
//   width : linear(0,10) delta=0.05
//   target = situation            (optional; datasets use it)
//   [rules]
//   0 0_T * * * * *  p=1 def dp=0 c=2 counters=[symbolic:1]
//
// Cell tokens are a value name, a real literal, `*` or `?`; the target cell
// carries a `_T` suffix. `#` starts a comment.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "flare/model.hpp"

namespace flare {

std::string format_number(double x);
std::string format_cell(const AttributeDef& attr, const Cell& cell);

/// Parses one cell token (without any `_T` suffix). Throws ParseError.
Cell parse_cell(const AttributeDef& attr, std::string_view token, std::size_t line = 0,
                std::size_t column = 0);

/// A rule line as written, before it becomes a StoredRule.
struct RuleLine {
  Vector vector;
  std::optional<int> dynamic_priority;
  std::optional<int> num_covers;
  std::optional<std::vector<int>> counters;
};

/// Parses cells and annotations of one line. A `?_T` target is accepted
/// only when `allow_unknown_target` is set.
RuleLine parse_rule_line(const Schema& schema, std::string_view text, std::size_t line = 0,
                         bool allow_unknown_target = false);

/// StoredRule from a parsed line; unspecified metadata takes the defaults of
/// a freshly stored vector.
StoredRule to_rule(const Schema& schema, const RuleLine& line);

/// Cells plus `def` and `p=` when they differ from the defaults.
std::string format_vector(const Schema& schema, const Vector& v);
/// Canonical stored form: cells, `def`, then p, dp, c and counters.
std::string format_rule(const Schema& schema, const StoredRule& rule);

struct SchemaSpec {
  Schema schema;
  std::optional<AttrIndex> target;
};

/// Parses one `name : kind(...)` or `target = name` line into `attrs`/`target`.
void parse_schema_line(std::string_view text, std::size_t line, std::vector<AttributeDef>& attrs,
                       std::optional<std::string>& target);
SchemaSpec finish_schema(std::vector<AttributeDef> attrs, const std::optional<std::string>& target,
                         std::size_t line);
std::string format_schema(const Schema& schema);

/// Parses a full file: a [schema] section optionally followed by [rules].
SchemaSpec parse_schema(std::string_view text);
KnowledgeBase parse_kb(std::string_view text);
std::string format_kb(const KnowledgeBase& kb);

/// Plain vector lines read against a known schema, e.g. a precept file. A
/// leading [schema] section is allowed if it names the same attributes and
/// values; a [rules] header is skipped.
std::vector<Vector> parse_vectors(const Schema& schema, std::string_view text);
std::vector<Vector> load_vectors(const Schema& schema, const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view text);

KnowledgeBase load_kb(const std::filesystem::path& path);
void save_kb(const KnowledgeBase& kb, const std::filesystem::path& path);

/// Small helpers shared by the text parsers.
namespace text {
std::string_view trim(std::string_view s);
std::string_view strip_comment(std::string_view s);
std::vector<std::string_view> split_ws(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char sep);
std::vector<std::string_view> lines(std::string_view s);
std::optional<double> to_double(std::string_view s);
std::optional<long long> to_int(std::string_view s);
/// 1-based column of `part` inside `whole` (part must be a view into whole).
std::size_t column_of(std::string_view whole, std::string_view part);
}  // namespace text

}  // namespace flare
