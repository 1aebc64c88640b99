// flare: command-line front end.
//
// Exit status: 0 success, 1 a scenario query failed, 2 bad input.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "flare/crossval.hpp"
#include "flare/dataset.hpp"
#include "flare/error.hpp"
#include "flare/kb_io.hpp"
#include "flare/learner.hpp"
#include "flare/precepts.hpp"
#include "flare/reasoner.hpp"
#include "flare/scenario.hpp"
#include "flare/translate.hpp"

namespace {

using namespace flare;

struct Common {
  std::uint64_t seed = 0;
  double td = 0.0;
  bool trace = false;
};

void add_reason_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "seed for definition choice");
  cmd->add_option("--td", c.td, "similarity threshold for subgoals")->check(CLI::NonNegativeNumber);
}

ReasonConfig reason_config(const Common& c) {
  ReasonConfig cfg;
  cfg.rng_seed = c.seed;
  cfg.td_threshold = c.td;
  return cfg;
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    write_file(out_path, text);
  }
}

// A query is the full cell list; the target cell carries _T and is ?.
Vector parse_query(const Schema& schema, const std::string& line, std::size_t lineno) {
  auto parsed = parse_rule_line(schema, line, lineno, true);
  if (!parsed.vector.target_cell().is_dont_know()) throw ParseError("query target must be ?_T", lineno);
  return parsed.vector;
}

// Facts for precept generation: cells only, any _T suffix ignored.
Vector parse_facts(const Schema& schema, const std::string& line, AttrIndex target) {
  const auto tokens = text::split_ws(text::strip_comment(line));
  if (tokens.size() != schema.arity())
    throw ParseError("facts need " + std::to_string(schema.arity()) + " cells", 1);
  Vector v;
  v.target = target;
  v.cells.resize(schema.arity());
  for (AttrIndex i = 0; i < schema.arity(); ++i) {
    auto tok = tokens[i];
    if (tok.ends_with("_T")) tok.remove_suffix(2);
    v[i] = parse_cell(schema[i], tok, 1, text::column_of(line, tokens[i]));
  }
  v[target] = Cell::dont_know();
  return v;
}

int run_learn(const std::string& input, const std::string& data, const std::string& into, const std::string& out,
              const Common& c, bool report) {
  KnowledgeBase kb;
  std::vector<Vector> stream;
  if (!data.empty()) {
    auto d = load_dataset(input, data);
    kb = KnowledgeBase(d.schema);
    stream = std::move(d.examples);
  } else {
    const auto src = load_kb(input);
    kb = KnowledgeBase(src.schema());
    for (const auto& r : src.rules()) stream.push_back(r.vector);
  }
  if (!into.empty()) {
    auto start = load_kb(into);
    if (!(start.schema() == kb.schema()))
      throw SchemaMismatch("starting knowledge base has a different schema");
    kb = std::move(start);
  }
  const auto cfg = reason_config(c);
  // Reports are comment lines so that stdout stays a loadable KB.
  for (std::size_t i = 0; i < stream.size(); ++i) {
    const auto result = learn(kb, stream[i], cfg);
    if (report) std::cout << "# step=" << i + 1 << ' ' << format_report(kb.schema(), stream[i], result) << '\n';
    if (c.trace)
      for (const auto& l : text::lines(format_trace(kb.schema(), result.reasoning))) std::cout << "#   " << l << '\n';
  }
  emit(out, format_kb(kb));
  return 0;
}

int run_reason(const std::string& kb_path, const std::vector<std::string>& queries, const std::string& file,
               const Common& c) {
  const auto kb = load_kb(kb_path);
  std::vector<std::pair<std::size_t, std::string>> lines;
  for (const auto& q : queries) lines.emplace_back(0, q);
  if (!file.empty()) {
    const auto body = read_file(file);
    const auto all = text::lines(body);
    for (std::size_t k = 0; k < all.size(); ++k)
      if (!text::trim(text::strip_comment(all[k])).empty()) lines.emplace_back(k + 1, std::string(all[k]));
  }
  if (lines.empty()) throw Error("no queries given");
  const auto cfg = reason_config(c);
  std::size_t n = 0;
  for (const auto& [lineno, text_line] : lines) {
    const auto q = parse_query(kb.schema(), text_line, lineno);
    const auto outcome = reason(kb, q, cfg);
    const auto& tattr = kb.schema()[q.target];
    std::cout << "query=" << ++n << " target="
              << (outcome.derived_target ? format_cell(tattr, Cell::nominal(*outcome.derived_target)) : "?")
              << " winner=" << (outcome.winner ? std::to_string(outcome.winner->value) : "-")
              << " distance=" << format_number(outcome.winner_distance) << " iterations=" << outcome.iterations
              << " conflicts=" << outcome.conflicts.size() << " completed=\""
              << format_vector(kb.schema(), outcome.completed) << "\"\n";
    if (c.trace) std::cout << format_trace(kb.schema(), outcome);
  }
  return 0;
}

struct EvalArgs {
  std::string base;
  std::string data;
  std::string precepts;
  int folds = 10;
  int repeats = 10;
  std::uint64_t seed = 1;
  double td = 0.0;
  std::optional<double> delta_fraction;
  bool serial = false;
  bool per_trial = false;
};

int run_eval(const EvalArgs& a) {
  const auto d = a.data.empty() ? load_dataset(a.base) : load_dataset(a.base, a.data);
  EvalConfig cfg;
  cfg.folds = a.folds;
  cfg.orderings_per_fold = a.repeats;
  cfg.rng_seed = a.seed;
  cfg.td_threshold = a.td;
  cfg.delta_fraction = a.delta_fraction;
  if (!a.precepts.empty()) {
    cfg.precepts = load_vectors(d.schema, a.precepts);
    for (const auto& p : cfg.precepts)
      if (p.target != d.target) throw SchemaMismatch("precept concludes an attribute other than the target");
  }
  const auto r = a.serial ? cross_validate_serial(d.schema, d.examples, cfg) : cross_validate(d.schema, d.examples, cfg);
  if (a.per_trial)
    for (const auto& t : r.trials)
      std::cout << "fold=" << t.fold << " ordering=" << t.ordering << " train=" << t.train_size
                << " test=" << t.test_size << " correct=" << t.correct << " kb_size=" << t.kb_size << '\n';
  char buf[160];
  std::snprintf(buf, sizeof buf, "examples=%zu folds=%d repeats=%d seed=%llu precepts=%zu pa=%.2f ir=%.3f\n",
                d.examples.size(), a.folds, a.repeats, static_cast<unsigned long long>(a.seed), cfg.precepts.size(),
                r.predictive_accuracy, r.inductive_ratio);
  std::cout << buf;
  return 0;
}

int run_scenarios(const std::vector<std::string>& files, const Common& c) {
  bool ok = true;
  for (const auto& f : files) {
    const auto s = load_scenario(f);
    const auto r = run_scenario(s);
    std::cout << format_scenario_report(s, r, c.trace);
    ok = ok && r.passed();
  }
  return ok ? 0 : 1;
}

struct TranslateArgs {
  std::string input;
  std::string schema;
  std::string expand;
  std::string out;
  bool instance_priority = false;
  bool facts_as_definitions = false;
  bool clauses = false;
};

int run_translate(const TranslateArgs& a) {
  if (!a.expand.empty()) {
    if (a.schema.empty()) throw Error("--expand needs --schema");
    const auto schema = parse_schema(read_file(a.schema)).schema;
    std::string out;
    for (const auto& v : expand_internal_disjunction(schema, a.expand)) out += format_vector(schema, v) + '\n';
    emit(a.out, out);
    return 0;
  }
  if (a.input.empty()) throw Error("translate needs a clause file or --expand");
  TranslateOptions opt;
  opt.instance_priority = a.instance_priority;
  opt.facts_as_definitions = a.facts_as_definitions;
  const auto t = translate(parse_clauses(read_file(a.input)), opt);
  std::string out;
  if (a.clauses) {
    for (const auto& v : t.vectors) out += to_clause_text(t, v) + '\n';
  } else {
    out = format_schema(t.schema) + "[rules]\n";
    for (const auto& v : t.vectors) out += format_vector(t.schema, v) + '\n';
  }
  emit(a.out, out);
  return 0;
}

struct PreceptArgs {
  std::string general;
  std::string facts;
  std::string target;
  std::string out;
  bool keep_intermediates = false;
  int priority = 0;
};

int run_precepts(const PreceptArgs& a, const Common& c) {
  const auto src = load_kb(a.general);
  const auto& schema = src.schema();
  const AttrIndex target = schema.index_of(a.target);
  if (!schema[target].is_nominal()) throw SchemaMismatch("precept target must be nominal");
  std::vector<Vector> rules;
  for (const auto& r : src.rules()) rules.push_back(r.vector);
  const auto facts = parse_facts(schema, a.facts, target);
  PreceptOptions opt;
  opt.keep_intermediates = a.keep_intermediates;
  opt.static_priority = a.priority;
  std::string out;
  for (const auto& p : generate_precepts(schema, rules, facts, target, reason_config(c), opt))
    out += format_precept(schema, p) + '\n';
  emit(a.out, out);
  return 0;
}

int run_kb(const std::string& path, const std::string& out, bool check) {
  const auto kb = load_kb(path);
  if (check) {
    std::size_t bad = 0;
    for (const auto& r : kb.rules())
      for (const auto& p : validate_rule(kb.schema(), r)) {
        std::cout << "rule=" << r.id.value << " violation=\"" << p << "\"\n";
        ++bad;
      }
    std::cout << "attributes=" << kb.schema().arity() << " rules=" << kb.size()
              << " status=" << (bad ? "invalid" : "ok") << '\n';
    return bad ? 2 : 0;
  }
  emit(out, format_kb(kb));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"FLARE: incremental rule learning and default reasoning over attribute-value vectors"};
  app.require_subcommand(1);
  Common common;

  std::string learn_in, learn_data, learn_into, learn_out;
  bool learn_report = false;
  auto* learn_cmd = app.add_subcommand("learn", "learn vectors in order and print the resulting knowledge base");
  learn_cmd->add_option("input", learn_in, "KB-format vector file, or a schema file with --data")->required();
  learn_cmd->add_option("--data", learn_data, "CSV examples read against the schema in <input>");
  learn_cmd->add_option("--into", learn_into, "start from this knowledge base instead of an empty one");
  learn_cmd->add_option("-o,--output", learn_out, "write the knowledge base here");
  learn_cmd->add_flag("--report", learn_report, "one adapt line per vector");
  learn_cmd->add_flag("--trace", common.trace, "reasoning trace per vector");
  add_reason_flags(learn_cmd, common);

  std::string reason_kb, reason_file;
  std::vector<std::string> reason_queries;
  auto* reason_cmd = app.add_subcommand("reason", "answer queries against a knowledge base");
  reason_cmd->add_option("kb", reason_kb, "knowledge base file")->required();
  reason_cmd->add_option("queries", reason_queries, "query vectors, target written ?_T");
  reason_cmd->add_option("-f,--file", reason_file, "file with one query per line");
  reason_cmd->add_flag("--trace", common.trace, "print the inference trace");
  add_reason_flags(reason_cmd, common);

  EvalArgs eval;
  double delta = 0.0;
  auto* eval_cmd = app.add_subcommand("eval", "cross-validated predictive accuracy and inductive ratio");
  eval_cmd->add_option("dataset", eval.base, "schema file, or path without extension")->required();
  eval_cmd->add_option("--data", eval.data, "CSV examples (default: <dataset>.csv)");
  eval_cmd->add_option("--folds", eval.folds, "number of folds")->check(CLI::Range(2, 1000000));
  eval_cmd->add_option("--repeats", eval.repeats, "training orders per fold")->check(CLI::PositiveNumber);
  eval_cmd->add_option("--seed", eval.seed, "seed for folds and orders");
  eval_cmd->add_option("--td", eval.td, "similarity threshold for subgoals")->check(CLI::NonNegativeNumber);
  auto* delta_opt = eval_cmd->add_option("--delta-fraction", delta, "linear equality tolerance as a fraction of range")
                        ->check(CLI::Range(0.0, 1.0));
  eval_cmd->add_option("--precepts", eval.precepts, "vectors learned before each training run");
  eval_cmd->add_flag("--serial", eval.serial, "run trials one after another");
  eval_cmd->add_flag("--per-trial", eval.per_trial, "one line per fold and ordering");

  std::vector<std::string> scenario_files;
  auto* scenario_cmd = app.add_subcommand("scenario", "run scenario files; exit 1 when any query fails");
  scenario_cmd->add_option("files", scenario_files, "scenario files")->required();
  scenario_cmd->add_flag("--trace", common.trace, "print the inference trace of each query");

  TranslateArgs tr;
  auto* translate_cmd = app.add_subcommand("translate", "clauses to vectors");
  translate_cmd->add_option("input", tr.input, "clause file");
  translate_cmd->add_option("--schema", tr.schema, "schema for --expand");
  translate_cmd->add_option("--expand", tr.expand, "expand a rule with value sets, e.g. 'a={1,2} & b=3 => c=x'");
  translate_cmd->add_option("-o,--output", tr.out, "output file");
  translate_cmd->add_flag("--instance-priority", tr.instance_priority, "static priority 1 for ground facts");
  translate_cmd->add_flag("--facts-as-definitions", tr.facts_as_definitions,
                          "one definition vector per constant instead");
  translate_cmd->add_flag("--clauses", tr.clauses, "print the vectors back as clauses");

  PreceptArgs pr;
  auto* precepts_cmd = app.add_subcommand("precepts", "derive precepts from general rules and facts");
  precepts_cmd->add_option("general", pr.general, "knowledge base of general rules")->required();
  precepts_cmd->add_option("--facts", pr.facts, "facts vector, unknown cells written *")->required();
  precepts_cmd->add_option("--target", pr.target, "attribute to conclude")->required();
  precepts_cmd->add_option("-o,--output", pr.out, "output file");
  precepts_cmd->add_option("--priority", pr.priority, "static priority of emitted precepts");
  precepts_cmd->add_flag("--keep-intermediates", pr.keep_intermediates, "keep cells inferred along the way");
  add_reason_flags(precepts_cmd, common);

  std::string kb_path, kb_out;
  bool kb_check = false;
  auto* kb_cmd = app.add_subcommand("kb", "print a knowledge base in canonical form");
  kb_cmd->add_option("kb", kb_path, "knowledge base file")->required();
  kb_cmd->add_option("-o,--output", kb_out, "output file");
  kb_cmd->add_flag("--check", kb_check, "validate every rule instead of printing");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*learn_cmd) return run_learn(learn_in, learn_data, learn_into, learn_out, common, learn_report);
    if (*reason_cmd) return run_reason(reason_kb, reason_queries, reason_file, common);
    if (*eval_cmd) {
      if (*delta_opt) eval.delta_fraction = delta;
      return run_eval(eval);
    }
    if (*scenario_cmd) return run_scenarios(scenario_files, common);
    if (*translate_cmd) return run_translate(tr);
    if (*precepts_cmd) return run_precepts(pr, common);
    if (*kb_cmd) return run_kb(kb_path, kb_out, kb_check);
  } catch (const flare::Error& e) {
    std::cerr << "flare: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "flare: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
