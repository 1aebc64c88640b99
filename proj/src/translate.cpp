#include "flare/translate.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "flare/error.hpp"
#include "flare/kb_io.hpp"

namespace flare {

bool is_variable(std::string_view s) {
  if (s.empty() || !std::islower(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin() + 1, s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

namespace {

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '\'';
}

bool is_identifier(std::string_view s) {
  return !s.empty() && (std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_') &&
         std::all_of(s.begin(), s.end(), ident_char);
}

bool is_constant(std::string_view s) {
  return !s.empty() && !is_variable(s) && std::all_of(s.begin(), s.end(), [](char c) {
    return ident_char(c) || c == '.' || c == '+';
  });
}

// `part` is a view into `line`.
Literal parse_literal(std::string_view line, std::string_view part, std::size_t line_no) {
  const auto text_part = text::trim(part);
  const std::size_t col = text::column_of(line, text_part);
  Literal lit;
  lit.column = col;
  std::string_view s = text_part;
  if (s.empty()) throw SyntaxError("empty literal", line_no, col ? col : text::column_of(line, part));
  if (s.front() == '~') {
    lit.negated = true;
    s = text::trim(s.substr(1));
  }
  const auto open = s.find('(');
  if (open == std::string_view::npos || s.back() != ')')
    throw SyntaxError("expected predicate(argument)", line_no, col);
  const auto name = text::trim(s.substr(0, open));
  if (!is_identifier(name)) throw SyntaxError("bad predicate name '" + std::string(name) + "'", line_no, col);
  lit.predicate = std::string(name);
  const auto args = text::split(s.substr(open + 1, s.size() - open - 2), ',');
  if (args.size() > 2)
    throw UnsupportedClause("predicates take at most two arguments", line_no, col);
  const auto subject = text::trim(args[0]);
  if (subject.empty()) throw SyntaxError("missing argument", line_no, col);
  if (!is_variable(subject) && !is_constant(subject))
    throw SyntaxError("bad argument '" + std::string(subject) + "'", line_no, text::column_of(line, subject));
  lit.subject = std::string(subject);
  if (args.size() == 2) {
    const auto value = text::trim(args[1]);
    if (value.empty()) throw SyntaxError("missing second argument", line_no, col);
    if (is_variable(value))
      throw UnsupportedClause("two variables in one literal", line_no, text::column_of(line, value));
    if (!is_constant(value))
      throw SyntaxError("bad constant '" + std::string(value) + "'", line_no, text::column_of(line, value));
    if (lit.negated) throw UnsupportedClause("negated valued predicates are not supported", line_no, col);
    lit.value = std::string(value);
  }
  return lit;
}

}  // namespace

ClauseFile parse_clauses(std::string_view input) {
  ClauseFile out;
  const auto all = text::lines(input);
  for (std::size_t k = 0; k < all.size(); ++k) {
    const std::size_t line_no = k + 1;
    const std::string_view line = all[k];
    const auto body = text::trim(text::strip_comment(line));
    if (body.empty()) continue;
    if (body.starts_with("order:")) {
      if (!out.order.empty()) throw SyntaxError("second order directive", line_no, 1);
      for (auto name : text::split(body.substr(6), ',')) {
        const auto n = text::trim(name);
        if (n.empty()) throw SyntaxError("empty name in order directive", line_no, text::column_of(line, name));
        out.order.emplace_back(n);
      }
      out.order_line = line_no;
      continue;
    }
    Clause clause;
    clause.line = line_no;
    const auto arrow = body.find("=>");
    if (arrow == std::string_view::npos) {
      if (body.find('&') != std::string_view::npos)
        throw SyntaxError("conjunction without '=>'", line_no, text::column_of(line, body));
      clause.kind = ClauseKind::ground_fact;
      clause.conclusion = parse_literal(line, body, line_no);
      if (is_variable(clause.conclusion.subject))
        throw UnsupportedClause("a fact must name a constant, not a variable", line_no, clause.conclusion.column);
      clause.constant = clause.conclusion.subject;
      out.clauses.push_back(std::move(clause));
      continue;
    }
    clause.kind = ClauseKind::implication;
    const auto lhs = body.substr(0, arrow);
    const auto rhs = body.substr(arrow + 2);
    if (rhs.find('|') != std::string_view::npos || rhs.find('&') != std::string_view::npos ||
        rhs.find("=>") != std::string_view::npos)
      throw UnsupportedClause("the conclusion must be a single literal", line_no, text::column_of(line, rhs));
    if (text::trim(lhs).empty()) throw SyntaxError("implication without premise", line_no, 1);
    for (auto part : text::split(lhs, '&')) clause.premise.push_back(parse_literal(line, part, line_no));
    clause.conclusion = parse_literal(line, rhs, line_no);

    const std::string& var = clause.conclusion.subject;
    if (!is_variable(var))
      throw UnsupportedClause("implications range over a variable, not a constant", line_no,
                              clause.conclusion.column);
    for (const auto& lit : clause.premise) {
      if (!is_variable(lit.subject))
        throw UnsupportedClause("implications range over a variable, not a constant", line_no, lit.column);
      if (lit.subject != var) throw UnsupportedClause("more than one variable", line_no, lit.column);
      if (lit.predicate == clause.conclusion.predicate)
        throw UnsupportedClause("the conclusion predicate recurs in the premise", line_no, lit.column);
    }
    out.clauses.push_back(std::move(clause));
  }
  return out;
}

Translation translate(const ClauseFile& file, const TranslateOptions& options) {
  struct Pred {
    bool valued = false;
    std::vector<std::string> values;
  };
  std::vector<std::string> names;
  std::map<std::string, Pred> preds;
  std::vector<std::string> constants;

  auto note = [&](const Literal& lit) {
    auto [it, fresh] = preds.try_emplace(lit.predicate);
    if (fresh) {
      it->second.valued = lit.value.has_value();
      names.push_back(lit.predicate);
    } else if (it->second.valued != lit.value.has_value()) {
      throw InconsistentArity("predicate '" + lit.predicate + "' is used with one and with two arguments");
    }
    if (lit.value && std::find(it->second.values.begin(), it->second.values.end(), *lit.value) ==
                         it->second.values.end())
      it->second.values.push_back(*lit.value);
  };
  for (const auto& c : file.clauses) {
    for (const auto& lit : c.premise) note(lit);
    note(c.conclusion);
    if (c.kind == ClauseKind::ground_fact &&
        std::find(constants.begin(), constants.end(), c.constant) == constants.end())
      constants.push_back(c.constant);
  }
  if (!constants.empty()) {
    if (preds.count("label")) throw InconsistentArity("'label' is reserved for instance constants");
    names.push_back("label");
  }

  if (!file.order.empty()) {
    auto sorted_order = file.order;
    auto sorted_names = names;
    std::sort(sorted_order.begin(), sorted_order.end());
    std::sort(sorted_names.begin(), sorted_names.end());
    if (sorted_order != sorted_names)
      throw SyntaxError("order directive must list every attribute exactly once", file.order_line, 1);
    names = file.order;
  }

  Translation t;
  std::vector<AttributeDef> attrs;
  for (const auto& n : names) {
    if (n == "label" && !constants.empty()) {
      attrs.push_back(AttributeDef::nominal(n, constants));
      t.roles.push_back(AttrRole::label);
    } else if (preds.at(n).valued) {
      attrs.push_back(AttributeDef::nominal(n, preds.at(n).values));
      t.roles.push_back(AttrRole::multi_valued);
    } else {
      attrs.push_back(AttributeDef::nominal(n, {"0", "1"}));
      t.roles.push_back(AttrRole::boolean);
    }
  }
  t.schema = Schema(std::move(attrs));
  const Schema& s = t.schema;

  auto cell_of = [&](const Literal& lit) {
    const auto& a = s[s.index_of(lit.predicate)];
    if (lit.value) return Cell::nominal(*a.find_value(*lit.value));
    return Cell::nominal(lit.negated ? 0 : 1);
  };
  auto blank = [&] {
    Vector v;
    v.cells.assign(s.arity(), Cell::dont_care());
    return v;
  };
  std::optional<AttrIndex> label;
  if (!constants.empty()) label = s.index_of("label");

  std::map<std::string, std::size_t> definition_of;  // constant -> position in t.vectors
  for (const auto& c : file.clauses) {
    if (c.kind == ClauseKind::implication) {
      Vector v = blank();
      for (const auto& lit : c.premise) {
        const auto i = s.index_of(lit.predicate);
        const Cell cell = cell_of(lit);
        if (v[i].asserted() && !(v[i] == cell))
          throw UnsupportedClause("contradictory premise literals", c.line, lit.column);
        v[i] = cell;
      }
      v.target = s.index_of(c.conclusion.predicate);
      v[v.target] = cell_of(c.conclusion);
      t.vectors.push_back(std::move(v));
      continue;
    }
    const auto pi = s.index_of(c.conclusion.predicate);
    const Cell value = cell_of(c.conclusion);
    const Cell who = Cell::nominal(*s[*label].find_value(c.constant));
    if (options.facts_as_definitions) {
      auto [it, fresh] = definition_of.try_emplace(c.constant, t.vectors.size());
      if (fresh) {
        Vector v = blank();
        v.target = *label;
        v[*label] = who;
        v.is_definition = true;
        t.vectors.push_back(std::move(v));
      }
      Vector& v = t.vectors[it->second];
      if (v[pi].asserted() && !(v[pi] == value))
        throw UnsupportedClause("contradictory facts about " + c.constant, c.line, c.conclusion.column);
      v[pi] = value;
      continue;
    }
    Vector v = blank();
    v[*label] = who;
    v.target = pi;
    v[pi] = value;
    if (options.instance_priority) v.static_priority = 1;
    t.vectors.push_back(std::move(v));
  }
  return t;
}

std::string to_clause_text(const Translation& t, const Vector& v) {
  const Schema& s = t.schema;
  auto literal = [&](AttrIndex i, const std::string& subject) -> std::string {
    const auto& a = s[i];
    if (!v[i].asserted()) throw Error("attribute '" + a.name + "' has no clause form for '?'");
    if (t.roles[i] == AttrRole::boolean)
      return (v[i].index() == 0 ? "~" : "") + a.name + "(" + subject + ")";
    return a.name + "(" + subject + ", " + a.values[v[i].index()] + ")";
  };
  std::optional<AttrIndex> label;
  for (AttrIndex i = 0; i < t.roles.size(); ++i)
    if (t.roles[i] == AttrRole::label) label = i;

  std::vector<AttrIndex> premise;
  for (AttrIndex i = 0; i < v.size(); ++i)
    if (i != v.target && !v[i].is_dont_care()) premise.push_back(i);

  if (label && v.target == *label) {
    // One definition standing for several ground facts.
    const std::string who = s[*label].values[v[*label].index()];
    std::string out;
    for (auto i : premise) out += (out.empty() ? "" : "\n") + literal(i, who);
    return out;
  }
  if (label && premise.size() == 1 && premise[0] == *label)
    return literal(v.target, s[*label].values[v[*label].index()]);

  std::string out;
  for (auto i : premise) {
    if (!out.empty()) out += " & ";
    out += label && i == *label ? "label(x, " + s[i].values[v[i].index()] + ")" : literal(i, "x");
  }
  return out + " => " + literal(v.target, "x");
}

std::vector<Vector> expand_internal_disjunction(const Schema& schema, std::string_view rule_text) {
  const auto body = text::trim(text::strip_comment(rule_text));
  const auto arrow = body.find("=>");
  if (arrow == std::string_view::npos) throw SyntaxError("expected '=>'", 1, 1);
  std::vector<std::pair<AttrIndex, std::vector<Cell>>> choices;
  for (auto part : text::split(body.substr(0, arrow), '&')) {
    const auto p = text::trim(part);
    const auto col = text::column_of(rule_text, p);
    const auto eq = p.find('=');
    if (eq == std::string_view::npos) throw SyntaxError("expected attr=value or attr={v,...}", 1, col);
    const auto name = text::trim(p.substr(0, eq));
    auto idx = schema.find(name);
    if (!idx) throw SyntaxError("unknown attribute '" + std::string(name) + "'", 1, col);
    auto rhs = text::trim(p.substr(eq + 1));
    std::vector<std::string_view> items;
    if (!rhs.empty() && rhs.front() == '{') {
      if (rhs.back() != '}') throw SyntaxError("unterminated value set", 1, col);
      items = text::split(rhs.substr(1, rhs.size() - 2), ',');
    } else {
      items.push_back(rhs);
    }
    std::vector<Cell> cells;
    for (auto item : items) cells.push_back(parse_cell(schema[*idx], text::trim(item), 1, col));
    if (cells.empty()) throw SyntaxError("empty value set", 1, col);
    choices.emplace_back(*idx, std::move(cells));
  }
  const auto rhs_tokens = text::split_ws(body.substr(arrow + 2));
  if (rhs_tokens.empty()) throw SyntaxError("missing conclusion", 1, arrow + 3);
  Vector base;
  base.cells.assign(schema.arity(), Cell::dont_care());
  {
    const auto tok = rhs_tokens[0];
    const auto eq = tok.find('=');
    if (eq == std::string_view::npos) throw SyntaxError("conclusion must be attr=value", 1, text::column_of(rule_text, tok));
    auto idx = schema.find(tok.substr(0, eq));
    if (!idx) throw SyntaxError("unknown attribute '" + std::string(tok.substr(0, eq)) + "'", 1,
                                text::column_of(rule_text, tok));
    base.target = *idx;
    base[*idx] = parse_cell(schema[*idx], tok.substr(eq + 1), 1, text::column_of(rule_text, tok));
  }
  for (std::size_t k = 1; k < rhs_tokens.size(); ++k) {
    const auto tok = rhs_tokens[k];
    if (tok == "def") {
      base.is_definition = true;
    } else if (tok.starts_with("p=")) {
      auto p = text::to_int(tok.substr(2));
      if (!p || *p < 0) throw SyntaxError("bad priority", 1, text::column_of(rule_text, tok));
      base.static_priority = static_cast<int>(*p);
    } else {
      throw SyntaxError("unexpected '" + std::string(tok) + "'", 1, text::column_of(rule_text, tok));
    }
  }
  for (const auto& [i, cells] : choices)
    if (i == base.target) throw SyntaxError("target attribute also appears in the premise", 1, 1);

  std::vector<Vector> out{base};
  for (const auto& [i, cells] : choices) {
    std::vector<Vector> next;
    for (const auto& partial : out)
      for (const auto& c : cells) {
        Vector v = partial;
        v[i] = c;
        next.push_back(std::move(v));
      }
    out = std::move(next);
  }
  return out;
}

}  // namespace flare
