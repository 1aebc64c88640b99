#include "flare/kb_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "flare/error.hpp"

namespace flare {

namespace text {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string_view strip_comment(std::string_view s) {
  const auto h = s.find('#');
  return h == std::string_view::npos ? s : s.substr(0, h);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    if (i >= s.size()) break;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto p = s.find(sep, start);
    if (p == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, p - start));
    start = p + 1;
  }
}

std::vector<std::string_view> lines(std::string_view s) {
  auto out = split(s, '\n');
  if (!out.empty() && out.back().empty()) out.pop_back();
  return out;
}

std::optional<double> to_double(std::string_view s) {
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double x = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
  return x;
}

std::optional<long long> to_int(std::string_view s) {
  if (s.empty()) return std::nullopt;
  long long x = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
  return x;
}

std::size_t column_of(std::string_view whole, std::string_view part) {
  if (part.data() < whole.data() || part.data() > whole.data() + whole.size()) return 0;
  return static_cast<std::size_t>(part.data() - whole.data()) + 1;
}

}  // namespace text

std::string format_number(double x) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, p);
}

std::string format_cell(const AttributeDef& attr, const Cell& cell) {
  if (cell.is_dont_care()) return "*";
  if (cell.is_dont_know()) return "?";
  if (attr.is_nominal()) {
    if (cell.index() < attr.values.size()) return attr.values[cell.index()];
    return "#" + std::to_string(cell.index());
  }
  return format_number(cell.value());
}

Cell parse_cell(const AttributeDef& attr, std::string_view token, std::size_t line,
                std::size_t column) {
  if (token == "*") return Cell::dont_care();
  if (token == "?") return Cell::dont_know();
  const auto where = [&] {
    std::string w;
    if (line) w += "line " + std::to_string(line);
    if (line && column) w += ", column " + std::to_string(column);
    return w.empty() ? w : w + ": ";
  };
  if (attr.is_nominal()) {
    if (auto i = attr.find_value(token)) return Cell::nominal(*i);
    throw DomainError(where() + "value '" + std::string(token) + "' is not in the domain of '" +
                      attr.name + "'");
  }
  auto x = text::to_double(token);
  if (!x) throw ParseError("expected a number for '" + attr.name + "', got '" + std::string(token) + "'",
                           line, column);
  if (*x < attr.min || *x > attr.max)
    throw DomainError(where() + "value " + std::string(token) + " outside [" + format_number(attr.min) +
                      ", " + format_number(attr.max) + "] of '" + attr.name + "'");
  return Cell::linear(*x);
}

namespace {

int parse_int_annotation(std::string_view whole, std::string_view tok, std::string_view value,
                         std::size_t line) {
  auto x = text::to_int(value);
  if (!x || *x < 0 || *x > 1'000'000'000)
    throw ParseError("bad annotation '" + std::string(tok) + "'", line, text::column_of(whole, tok));
  return static_cast<int>(*x);
}

}  // namespace

RuleLine parse_rule_line(const Schema& schema, std::string_view line_text, std::size_t line,
                         bool allow_unknown_target) {
  const auto tokens = text::split_ws(text::strip_comment(line_text));
  const std::size_t n = schema.arity();
  if (tokens.size() < n)
    throw ParseError("expected " + std::to_string(n) + " cells, found " + std::to_string(tokens.size()),
                     line);
  RuleLine out;
  out.vector.cells.resize(n);
  std::optional<AttrIndex> target;
  for (AttrIndex i = 0; i < n; ++i) {
    std::string_view tok = tokens[i];
    const auto col = text::column_of(line_text, tok);
    if (tok.size() > 2 && tok.ends_with("_T")) {
      if (target) throw ParseError("more than one target cell", line, col);
      target = i;
      tok.remove_suffix(2);
      if (tok == "*") throw ParseError("target cell cannot be don't-care", line, col);
      if (tok == "?" && !allow_unknown_target) throw ParseError("target value must be given", line, col);
    }
    out.vector.cells[i] = parse_cell(schema[i], tok, line, col);
  }
  if (!target) throw ParseError("no target cell (suffix _T)", line);
  out.vector.target = *target;

  for (std::size_t k = n; k < tokens.size(); ++k) {
    const std::string_view tok = tokens[k];
    const auto col = text::column_of(line_text, tok);
    if (tok == "def") {
      out.vector.is_definition = true;
      continue;
    }
    const auto eq = tok.find('=');
    if (eq == std::string_view::npos) throw ParseError("unexpected token '" + std::string(tok) + "'", line, col);
    const auto key = tok.substr(0, eq);
    const auto value = tok.substr(eq + 1);
    if (key == "p") {
      out.vector.static_priority = parse_int_annotation(line_text, tok, value, line);
    } else if (key == "dp") {
      out.dynamic_priority = parse_int_annotation(line_text, tok, value, line);
    } else if (key == "c") {
      out.num_covers = parse_int_annotation(line_text, tok, value, line);
    } else if (key == "counters") {
      const auto& attr = schema[*target];
      if (!attr.is_nominal()) throw ParseError("counters need a nominal target", line, col);
      if (value.size() < 2 || value.front() != '[' || value.back() != ']')
        throw ParseError("counters must look like [value:k,...]", line, col);
      std::vector<int> counters(attr.values.size(), 0);
      const auto body = value.substr(1, value.size() - 2);
      if (!body.empty()) {
        for (auto entry : text::split(body, ',')) {
          const auto colon = entry.rfind(':');
          if (colon == std::string_view::npos) throw ParseError("counter entry needs value:k", line, col);
          auto idx = attr.find_value(entry.substr(0, colon));
          if (!idx)
            throw ParseError("unknown counter value '" + std::string(entry.substr(0, colon)) + "'", line, col);
          counters[*idx] = parse_int_annotation(line_text, tok, entry.substr(colon + 1), line);
        }
      }
      out.counters = std::move(counters);
    } else {
      throw ParseError("unknown annotation '" + std::string(key) + "'", line, col);
    }
  }
  return out;
}

StoredRule to_rule(const Schema& schema, const RuleLine& line) {
  StoredRule r = make_rule(schema, line.vector);
  if (line.dynamic_priority) r.dynamic_priority = *line.dynamic_priority;
  if (line.num_covers) r.num_covers = *line.num_covers;
  if (line.counters) r.counters = *line.counters;
  return r;
}

namespace {

std::string format_cells(const Schema& schema, const Vector& v) {
  std::string out;
  for (AttrIndex i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += format_cell(schema[i], v[i]);
    if (i == v.target) out += "_T";
  }
  return out;
}

}  // namespace

std::string format_vector(const Schema& schema, const Vector& v) {
  std::string out = format_cells(schema, v);
  if (v.is_definition) out += " def";
  if (v.static_priority != 0) out += " p=" + std::to_string(v.static_priority);
  return out;
}

std::string format_rule(const Schema& schema, const StoredRule& rule) {
  std::string out = format_cells(schema, rule.vector);
  if (rule.vector.is_definition) out += " def";
  out += " p=" + std::to_string(rule.static_priority());
  out += " dp=" + std::to_string(rule.dynamic_priority);
  out += " c=" + std::to_string(rule.num_covers);
  out += " counters=[";
  const auto& attr = schema[rule.vector.target];
  bool first = true;
  for (std::size_t i = 0; i < rule.counters.size(); ++i) {
    if (rule.counters[i] == 0) continue;
    if (!first) out += ',';
    first = false;
    out += (i < attr.values.size() ? attr.values[i] : std::to_string(i)) + ":" +
           std::to_string(rule.counters[i]);
  }
  out += ']';
  return out;
}

void parse_schema_line(std::string_view line_text, std::size_t line, std::vector<AttributeDef>& attrs,
                       std::optional<std::string>& target) {
  const auto body = text::trim(text::strip_comment(line_text));
  const auto colon = body.find(':');
  if (colon == std::string_view::npos) {
    const auto eq = body.find('=');
    if (eq != std::string_view::npos && text::trim(body.substr(0, eq)) == "target") {
      const auto name = text::trim(body.substr(eq + 1));
      if (name.empty()) throw ParseError("target needs an attribute name", line);
      target = std::string(name);
      return;
    }
    throw ParseError("expected 'name : nominal(...)' or 'name : linear(min,max)'", line,
                     text::column_of(line_text, body));
  }
  const auto name = text::trim(body.substr(0, colon));
  if (name.empty() || name.find_first_of(" \t") != std::string_view::npos)
    throw ParseError("bad attribute name", line, text::column_of(line_text, body));
  auto rest = text::trim(body.substr(colon + 1));
  const auto col = text::column_of(line_text, rest);
  const auto open = rest.find('(');
  const auto close = rest.find(')');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open)
    throw ParseError("attribute kind needs a parenthesized argument list", line, col);
  const auto kind = text::trim(rest.substr(0, open));
  const auto args = text::split(rest.substr(open + 1, close - open - 1), ',');
  const auto tail = text::trim(rest.substr(close + 1));
  if (kind == "nominal") {
    if (!tail.empty()) throw ParseError("unexpected text after nominal(...)", line, col);
    std::vector<std::string> values;
    for (auto a : args) {
      const auto v = text::trim(a);
      if (v.empty() || v == "*" || v == "?" || v.find_first_of(" \t:[]") != std::string_view::npos)
        throw ParseError("bad value name '" + std::string(v) + "'", line, col);
      values.emplace_back(v);
    }
    attrs.push_back(AttributeDef::nominal(std::string(name), std::move(values)));
  } else if (kind == "linear") {
    if (args.size() != 2) throw ParseError("linear needs (min,max)", line, col);
    auto lo = text::to_double(text::trim(args[0]));
    auto hi = text::to_double(text::trim(args[1]));
    if (!lo || !hi) throw ParseError("linear bounds must be numbers", line, col);
    double delta = kDefaultDeltaFraction;
    if (!tail.empty()) {
      if (!tail.starts_with("delta=")) throw ParseError("expected delta=<fraction>", line, col);
      auto d = text::to_double(tail.substr(6));
      if (!d) throw ParseError("bad delta fraction", line, col);
      delta = *d;
    }
    attrs.push_back(AttributeDef::linear(std::string(name), *lo, *hi, delta));
  } else {
    throw ParseError("unknown attribute kind '" + std::string(kind) + "'", line, col);
  }
}

SchemaSpec finish_schema(std::vector<AttributeDef> attrs, const std::optional<std::string>& target,
                         std::size_t line) {
  SchemaSpec out;
  try {
    out.schema = Schema(std::move(attrs));
  } catch (const SchemaMismatch& e) {
    throw ParseError(e.what(), line);
  }
  if (target) {
    auto t = out.schema.find(*target);
    if (!t) throw ParseError("target '" + *target + "' is not an attribute", line);
    out.target = *t;
  }
  return out;
}

std::string format_schema(const Schema& schema) {
  std::string out = "[schema]\n";
  for (const auto& a : schema.attributes()) {
    out += a.name + " : ";
    if (a.is_nominal()) {
      out += "nominal(";
      for (std::size_t i = 0; i < a.values.size(); ++i) out += (i ? "," : "") + a.values[i];
      out += ")";
    } else {
      out += "linear(" + format_number(a.min) + "," + format_number(a.max) + ") delta=" +
             format_number(a.delta_fraction);
    }
    out += '\n';
  }
  return out;
}

namespace {

struct Sections {
  SchemaSpec schema;
  std::vector<std::pair<std::size_t, std::string_view>> rules;
};

Sections split_sections(std::string_view text_in) {
  enum class In { none, schema, rules } in = In::none;
  std::vector<AttributeDef> attrs;
  std::optional<std::string> target;
  std::size_t schema_line = 0;
  bool have_schema = false;
  Sections out;
  const auto all = text::lines(text_in);
  for (std::size_t k = 0; k < all.size(); ++k) {
    const std::size_t line = k + 1;
    const auto body = text::trim(text::strip_comment(all[k]));
    if (body.empty()) continue;
    if (body == "[schema]") {
      if (have_schema) throw ParseError("second [schema] section", line);
      in = In::schema;
      schema_line = line;
      have_schema = true;
      continue;
    }
    if (body == "[rules]") {
      if (!have_schema) throw ParseError("[rules] before [schema]", line);
      in = In::rules;
      continue;
    }
    switch (in) {
      case In::none:
        throw ParseError("content before [schema]", line, text::column_of(all[k], body));
      case In::schema:
        parse_schema_line(all[k], line, attrs, target);
        break;
      case In::rules:
        out.rules.emplace_back(line, all[k]);
        break;
    }
  }
  if (!have_schema) throw ParseError("missing [schema] section", 0);
  out.schema = finish_schema(std::move(attrs), target, schema_line);
  return out;
}

}  // namespace

SchemaSpec parse_schema(std::string_view text_in) { return split_sections(text_in).schema; }

KnowledgeBase parse_kb(std::string_view text_in) {
  auto sections = split_sections(text_in);
  KnowledgeBase kb(sections.schema.schema);
  for (const auto& [line, body] : sections.rules) {
    auto parsed = parse_rule_line(kb.schema(), body, line);
    try {
      kb.insert(to_rule(kb.schema(), parsed));
    } catch (const InvalidVector& e) {
      throw ParseError(e.what(), line);
    }
  }
  return kb;
}

std::string format_kb(const KnowledgeBase& kb) {
  std::string out = format_schema(kb.schema());
  out += "[rules]\n";
  for (const auto& r : kb.rules()) out += format_rule(kb.schema(), r) + '\n';
  return out;
}

namespace {

bool same_attributes(const Schema& a, const Schema& b) {
  if (a.arity() != b.arity()) return false;
  for (AttrIndex i = 0; i < a.arity(); ++i) {
    const auto& x = a[i];
    const auto& y = b[i];
    if (x.name != y.name || x.kind != y.kind || x.values != y.values || x.min != y.min || x.max != y.max)
      return false;
  }
  return true;
}

}  // namespace

std::vector<Vector> parse_vectors(const Schema& schema, std::string_view text_in) {
  std::vector<Vector> out;
  if (text_in.find("[schema]") != std::string_view::npos) {
    const auto kb = parse_kb(text_in);
    if (!same_attributes(kb.schema(), schema)) throw SchemaMismatch("vector file declares a different schema");
    for (const auto& r : kb.rules()) out.push_back(r.vector);
    return out;
  }
  const auto all = text::lines(text_in);
  for (std::size_t k = 0; k < all.size(); ++k) {
    const auto body = text::trim(text::strip_comment(all[k]));
    if (body.empty() || body == "[rules]") continue;
    auto parsed = parse_rule_line(schema, all[k], k + 1);
    if (const auto problems = validate_vector(schema, parsed.vector); !problems.empty())
      throw ParseError(problems.front(), k + 1);
    out.push_back(std::move(parsed.vector));
  }
  return out;
}

std::vector<Vector> load_vectors(const Schema& schema, const std::filesystem::path& path) {
  return parse_vectors(schema, read_file(path));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view text_out) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text_out;
}

KnowledgeBase load_kb(const std::filesystem::path& path) { return parse_kb(read_file(path)); }

void save_kb(const KnowledgeBase& kb, const std::filesystem::path& path) {
  write_file(path, format_kb(kb));
}

}  // namespace flare
