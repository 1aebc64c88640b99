#include "flare/scenario.hpp"

#include <algorithm>
#include <utility>

#include "flare/error.hpp"
#include "flare/kb_io.hpp"
#include "flare/learner.hpp"

namespace flare {

namespace {

enum class Section { none, config, schema, train, rules, query };

bool parse_bool(std::string_view v, std::size_t line) {
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  throw ParseError("expected true or false, found '" + std::string(v) + "'", line);
}

void parse_config_line(std::string_view body, std::size_t line, ReasonConfig& cfg) {
  const auto eq = body.find('=');
  if (eq == std::string_view::npos) throw ParseError("config lines look like key = value", line);
  const auto key = text::trim(body.substr(0, eq));
  const auto value = text::trim(body.substr(eq + 1));
  if (key == "td") {
    const auto x = text::to_double(value);
    if (!x || *x < 0) throw ParseError("td must be a non-negative number", line);
    cfg.td_threshold = *x;
  } else if (key == "seed") {
    const auto x = text::to_int(value);
    if (!x || *x < 0) throw ParseError("seed must be a non-negative integer", line);
    cfg.rng_seed = static_cast<std::uint64_t>(*x);
  } else if (key == "dynamic") {
    cfg.allow_dynamic_priority_update = parse_bool(value, line);
  } else {
    throw ParseError("unknown config key '" + std::string(key) + "'", line);
  }
}

Expectation parse_expectation(const Schema& schema, AttrIndex target, std::string_view raw, std::size_t line) {
  // raw is everything after "expect"
  const auto body = text::trim(raw);
  const auto eq = body.find('=');
  if (eq == std::string_view::npos) throw ParseError("expect lines look like attr=value", line);
  const auto name = text::trim(body.substr(0, eq));
  const auto value = text::trim(body.substr(eq + 1));
  Expectation e;
  e.line = line;
  if (name == "target") {
    e.on_target = true;
    e.attribute = target;
  } else {
    const auto idx = schema.find(name);
    if (!idx) throw ParseError("unknown attribute '" + std::string(name) + "'", line);
    e.attribute = *idx;
  }
  e.value = parse_cell(schema[e.attribute], value, line);
  if (e.on_target && e.value.is_dont_care()) throw ParseError("a target cannot be expected to be *", line);
  return e;
}

std::string comment_of(std::string_view line) {
  const auto h = line.find('#');
  if (h == std::string_view::npos) return {};
  return std::string(text::trim(line.substr(h + 1)));
}

}  // namespace

Scenario parse_scenario(std::string_view text_in, std::string name) {
  Scenario s;
  s.name = std::move(name);
  Section in = Section::none;
  std::vector<AttributeDef> attrs;
  std::optional<std::string> target_name;
  std::size_t schema_line = 0;
  bool have_schema = false;

  const auto finish = [&](std::size_t line) {
    if (have_schema) return;
    if (schema_line == 0) throw ParseError("[schema] must come before vectors", line);
    s.schema = finish_schema(std::move(attrs), target_name, schema_line).schema;
    have_schema = true;
  };

  const auto all = text::lines(text_in);
  for (std::size_t k = 0; k < all.size(); ++k) {
    const std::size_t line = k + 1;
    const auto body = text::trim(text::strip_comment(all[k]));
    if (body.empty()) continue;
    if (body.front() == '[' && body.back() == ']') {
      if (body == "[config]") {
        in = Section::config;
      } else if (body == "[schema]") {
        if (schema_line) throw ParseError("second [schema] section", line);
        schema_line = line;
        in = Section::schema;
      } else if (body == "[train]" || body == "[rules]" || body == "[query]") {
        finish(line);
        in = body == "[train]" ? Section::train : body == "[rules]" ? Section::rules : Section::query;
      } else {
        throw ParseError("unknown section " + std::string(body), line);
      }
      continue;
    }

    switch (in) {
      case Section::none:
        throw ParseError("content before the first section", line, text::column_of(all[k], body));
      case Section::config:
        parse_config_line(body, line, s.config);
        break;
      case Section::schema:
        parse_schema_line(all[k], line, attrs, target_name);
        break;
      case Section::train:
      case Section::rules: {
        const auto parsed = parse_rule_line(s.schema, all[k], line);
        ScenarioStep step;
        step.line = line;
        if (in == Section::train) {
          if (parsed.dynamic_priority || parsed.num_covers || parsed.counters)
            throw ParseError("dp, c and counters belong in [rules], not [train]", line);
          step.kind = ScenarioStep::Kind::train;
        } else {
          step.kind = ScenarioStep::Kind::insert;
        }
        try {
          step.rule = to_rule(s.schema, parsed);
          if (const auto problems = validate_rule(s.schema, step.rule); !problems.empty())
            throw InvalidVector(problems.front());
        } catch (const InvalidVector& e) {
          throw ParseError(e.what(), line);
        }
        step.label = comment_of(all[k]);
        s.steps.push_back(std::move(step));
        break;
      }
      case Section::query: {
        if (body.starts_with("expect ") || body == "expect") {
          if (s.steps.empty() || s.steps.back().kind != ScenarioStep::Kind::query)
            throw ParseError("expect must follow a query", line);
          auto& q = s.steps.back();
          q.expectations.push_back(parse_expectation(s.schema, q.rule.vector.target, body.substr(6), line));
          break;
        }
        const auto parsed = parse_rule_line(s.schema, all[k], line, true);
        if (!parsed.vector.target_cell().is_dont_know())
          throw ParseError("query targets must be ?_T", line);
        ScenarioStep step;
        step.kind = ScenarioStep::Kind::query;
        step.line = line;
        step.rule.vector = parsed.vector;
        step.label = comment_of(all[k]);
        if (step.label.empty()) step.label = "line" + std::to_string(line);
        s.steps.push_back(std::move(step));
        break;
      }
    }
  }
  if (!schema_line) throw ParseError("missing [schema] section", 0);
  finish(0);
  for (const auto& step : s.steps)
    if (step.kind == ScenarioStep::Kind::query && step.expectations.empty())
      throw ParseError("query has no expect line", step.line);
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  return parse_scenario(read_file(path), path.stem().string());
}

bool ScenarioReport::passed() const {
  return std::all_of(queries.begin(), queries.end(), [](const QueryResult& q) { return q.passed(); });
}

ScenarioReport run_scenario(const Scenario& s) {
  ScenarioReport report;
  report.name = s.name;
  KnowledgeBase kb(s.schema);
  for (const auto& step : s.steps) {
    switch (step.kind) {
      case ScenarioStep::Kind::train:
        learn(kb, step.rule.vector, s.config);
        break;
      case ScenarioStep::Kind::insert:
        kb.insert(step.rule);
        break;
      case ScenarioStep::Kind::query: {
        QueryResult q;
        q.label = step.label;
        q.line = step.line;
        q.query = step.rule.vector;
        q.outcome = reason(std::as_const(kb), q.query, s.config);
        for (const auto& e : step.expectations) {
          Cell got = q.outcome.completed[e.attribute];
          if (e.on_target)
            got = q.outcome.derived_target ? Cell::nominal(*q.outcome.derived_target) : Cell::dont_know();
          const auto& attr = s.schema[e.attribute];
          if (got != e.value)
            q.failures.push_back((e.on_target ? std::string("target") : attr.name) + "=" + format_cell(attr, got) +
                                 " expected " + format_cell(attr, e.value));
        }
        report.queries.push_back(std::move(q));
        break;
      }
    }
  }
  report.kb_size = kb.size();
  return report;
}

std::string format_scenario_report(const Scenario& s, const ScenarioReport& r, bool with_trace) {
  std::string out;
  for (const auto& q : r.queries) {
    const auto& tattr = s.schema[q.query.target];
    out += "scenario=" + r.name + " query=" + q.label + " status=" + (q.passed() ? "PASS" : "FAIL");
    out += " target=" + (q.outcome.derived_target ? format_cell(tattr, Cell::nominal(*q.outcome.derived_target))
                                                   : std::string("?"));
    out += " winner=" + (q.outcome.winner ? std::to_string(q.outcome.winner->value) : std::string("-"));
    out += " distance=" + format_number(q.outcome.winner_distance);
    out += " iterations=" + std::to_string(q.outcome.iterations);
    for (const auto& f : q.failures) out += " mismatch=\"" + f + "\"";
    out += '\n';
    if (with_trace) out += format_trace(s.schema, q.outcome);
  }
  out += "scenario=" + r.name + " queries=" + std::to_string(r.queries.size()) +
         " kb_size=" + std::to_string(r.kb_size) + " status=" + (r.passed() ? "PASS" : "FAIL") + '\n';
  return out;
}

}  // namespace flare
