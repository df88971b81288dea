#include "deon/cli.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "deon/embed.h"
#include "deon/kb.h"
#include "deon/search.h"
#include "json.hpp"

namespace deon {

namespace {

using json = nlohmann::ordered_json;

struct Options {
  std::string logic = "e";
  std::string frame;
  int bound = 3;
  bool complete = false;
  std::string format = "text";
  bool show_steps = false;
  int workers = 1;
  std::string kb_file;
  bool tptp = false;
  bool local = false;
  std::string name = "conjecture";
  std::string model_file;
  int world = -1;
  int converse_bound = 4;
  std::vector<std::string> formulas;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

int exit_code(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::ModelFound:
    case Verdict::Kind::Valid:
      return kExitPositive;
    case Verdict::Kind::DecidedUnsatisfiable:
    case Verdict::Kind::CountermodelFound:
      return kExitNegative;
    case Verdict::Kind::NoModelUpTo:
    case Verdict::Kind::BudgetExceeded:
      return kExitUndetermined;
  }
  return kExitUsage;
}

Logic logic_of(const Options& o) {
  if (o.logic == "sdl") return Logic::Sdl;
  if (o.logic == "e") return Logic::E;
  throw UsageError("--logic must be 'sdl' or 'e'");
}

SearchConfig config_of(const Options& o) {
  SearchConfig cfg;
  cfg.logic = logic_of(o);
  cfg.frame = parse_frame(o.frame);
  if (o.bound < 1 || o.bound > kMaxWorlds) throw UsageError("--bound must be between 1 and 64");
  cfg.max_worlds = o.bound;
  cfg.complete = o.complete;
  cfg.workers = std::max(1, o.workers);
  return cfg;
}

Formula parse_input(const std::string& text, Logic logic, Signature& sig) {
  return parse_open(text, sig, parse_mode(logic));
}

std::string world_list(WorldSet s, int n) {
  std::string out = "{";
  bool first = true;
  for (int w = 0; w < n; ++w) {
    if (!contains(s, w)) continue;
    if (!first) out += ",";
    out += std::to_string(w);
    first = false;
  }
  return out + "}";
}

std::string model_text(const Model& m, Logic logic) {
  std::ostringstream os;
  os << "  worlds: " << m.worlds << "\n";
  os << "  " << (logic == Logic::Sdl ? "accessibility" : "betterness") << ":";
  bool any = false;
  for (int s = 0; s < m.worlds; ++s) {
    for (int t = 0; t < m.worlds; ++t) {
      if (m.related(s, t)) {
        os << " " << s << "->" << t;
        any = true;
      }
    }
  }
  os << (any ? "" : " (none)") << "\n";
  for (std::size_t i = 0; i < m.atoms.size(); ++i) {
    os << "  " << m.atoms[i] << ": " << world_list(m.valuation[i], m.worlds) << "\n";
  }
  if (!m.domain.empty()) {
    os << "  domain:";
    for (const auto& d : m.domain) os << " " << d;
    os << "\n";
  }
  return os.str();
}

class Reporter {
 public:
  Reporter(const Options& o, std::string command, std::ostream& out)
      : opts_(o), out_(out), start_(std::chrono::steady_clock::now()) {
    doc_["schema"] = 1;
    doc_["command"] = std::move(command);
  }

  bool json_mode() const { return opts_.format == "json"; }
  json& doc() { return doc_; }
  std::ostringstream& text() { return text_; }

  void verdict(const Verdict& v, Logic logic) {
    doc_["verdict"] = to_string(v.kind);
    doc_["logic"] = std::string(to_string(logic));
    doc_["complete"] = opts_.complete;
    doc_["bound"] = opts_.bound;
    if (v.max_worlds) doc_["searched_up_to"] = v.max_worlds;
    if (v.subformulas && v.decided()) doc_["subformulas"] = v.subformulas;
    doc_["method"] = v.method;
    doc_["nodes"] = v.nodes;
    if (v.model) doc_["model"] = json::parse(model_to_json(*v.model));
    if (v.kind == Verdict::Kind::CountermodelFound) doc_["world"] = v.world;

    text_ << "verdict: " << to_string(v.kind);
    if (v.kind == Verdict::Kind::NoModelUpTo) text_ << " (" << v.max_worlds << " worlds)";
    if (v.kind == Verdict::Kind::BudgetExceeded) text_ << " (" << v.nodes << " nodes)";
    text_ << "\n";
    if (!v.method.empty()) text_ << "method: " << v.method << "\n";
    if (v.model) {
      text_ << (v.kind == Verdict::Kind::CountermodelFound ? "countermodel" : "model");
      if (v.kind == Verdict::Kind::CountermodelFound) text_ << " (goal false at world " << v.world << ")";
      text_ << ":\n" << model_text(*v.model, logic);
    }
  }

  int finish(int code) {
    const auto ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    doc_["exit"] = code;
    doc_["time_ms"] = std::round(ms * 1000.0) / 1000.0;
    if (json_mode()) {
      out_ << doc_.dump(2) << "\n";
    } else {
      out_ << text_.str();
    }
    return code;
  }

 private:
  const Options& opts_;
  std::ostream& out_;
  json doc_;
  std::ostringstream text_;
  std::chrono::steady_clock::time_point start_;
};

std::vector<std::string> constants_of(const Signature& sig) {
  return {sig.constants().begin(), sig.constants().end()};
}

int cmd_parse(const Options& o, std::ostream& out) {
  Reporter r(o, "parse", out);
  const Logic logic = logic_of(o);
  Signature sig;
  if (o.formulas.size() != 1) throw UsageError("parse expects one formula");
  Formula f = parse_input(o.formulas[0], logic, sig);
  check_language(f, logic);
  r.doc()["formula"] = print(f);
  r.doc()["subformulas"] = subformulas(f).size();
  r.doc()["closed"] = is_closed(f);
  json preds = json::object();
  for (const auto& [p, a] : sig.predicates()) preds[p] = a;
  r.doc()["predicates"] = preds;
  r.doc()["constants"] = constants_of(sig);
  r.text() << print(f) << "\n";
  return r.finish(kExitPositive);
}

int cmd_eval(const Options& o, std::ostream& out) {
  Reporter r(o, "eval", out);
  const Logic logic = logic_of(o);
  if (o.formulas.size() != 1) throw UsageError("eval expects one formula");
  if (o.model_file.empty()) throw UsageError("eval requires --model FILE");
  std::ifstream in(o.model_file);
  if (!in) throw std::invalid_argument("cannot open " + o.model_file);
  std::stringstream ss;
  ss << in.rdbuf();
  Model m = model_from_json(ss.str());
  Signature sig;
  Formula f = parse_input(o.formulas[0], logic, sig);
  if (!is_closed(f)) throw std::invalid_argument("formula has free variables");
  if (!is_ground(f)) f = ground(f, m.domain);
  if (o.world >= m.worlds) throw UsageError("--world out of range");
  const WorldSet truth = truth_set(m, f, logic);
  const bool valid = truth == all_worlds(m.worlds);
  const bool positive = o.world >= 0 ? contains(truth, o.world) : valid;
  std::vector<int> ws;
  for (int w = 0; w < m.worlds; ++w) {
    if (contains(truth, w)) ws.push_back(w);
  }
  r.doc()["formula"] = print(f);
  r.doc()["truth_set"] = ws;
  r.doc()["valid"] = valid;
  if (o.world >= 0) r.doc()["holds_at_world"] = positive;
  r.text() << "truth set: " << world_list(truth, m.worlds) << "\n" << "valid: " << (valid ? "yes" : "no") << "\n";
  if (o.world >= 0) r.text() << "world " << o.world << ": " << (positive ? "true" : "false") << "\n";
  return r.finish(positive ? kExitPositive : kExitNegative);
}

int cmd_check(const Options& o, std::ostream& out) {
  Reporter r(o, "check", out);
  const SearchConfig cfg = config_of(o);
  if (o.formulas.size() != 1) throw UsageError("check expects one formula");
  Signature sig;
  Formula f = parse_input(o.formulas[0], cfg.logic, sig);
  r.doc()["formula"] = print(f);
  Verdict v = decide_valid(f, cfg);
  r.verdict(v, cfg.logic);
  return r.finish(exit_code(v.kind));
}

int cmd_model(const Options& o, std::ostream& out) {
  Reporter r(o, "model", out);
  const SearchConfig cfg = config_of(o);
  if (o.formulas.empty()) throw UsageError("model expects at least one formula");
  Signature sig;
  std::vector<Formula> fs;
  json printed = json::array();
  for (const std::string& t : o.formulas) {
    fs.push_back(parse_input(t, cfg.logic, sig));
    printed.push_back(print(fs.back()));
  }
  r.doc()["formulas"] = printed;
  Verdict v = find_model(fs, cfg);
  r.verdict(v, cfg.logic);
  return r.finish(exit_code(v.kind));
}

int cmd_translate(const Options& o, std::ostream& out) {
  Reporter r(o, "translate", out);
  const Logic logic = logic_of(o);
  if (o.formulas.size() != 1) throw UsageError("translate expects one formula");
  Signature sig;
  Formula f = parse_input(o.formulas[0], logic, sig);
  check_language(f, logic);
  const LTerm e = embed(f, logic);
  PrintOptions folded;
  folded.fold_quantifiers = true;
  r.doc()["formula"] = print(f);
  r.doc()["logic"] = std::string(to_string(logic));
  r.doc()["embedding"] = to_string(e);
  if (o.show_steps) {
    json steps = json::array();
    r.text() << "conversion:\n";
    for (const LTerm& s : conversion_steps(e)) {
      steps.push_back(to_string(s));
      r.text() << "  " << to_string(s) << "\n";
    }
    r.doc()["steps"] = steps;
  } else {
    r.text() << "embedding: " << to_string(e) << "\n";
  }
  const LTerm nf = normalize(e);
  r.doc()["normal_form"] = to_string(nf, folded);
  r.text() << "normal form: " << to_string(nf, folded) << "\n";
  const FOFormula fo = translate(f, logic, o.local);
  r.doc()["first_order"] = to_string(fo);
  r.doc()["guarded"] = is_guarded(fo);
  r.text() << "first-order: " << to_string(fo) << "\n";
  if (o.tptp) {
    const std::string p = emit_tptp_problem(fo, o.name, logic, constants_of(sig));
    r.doc()["tptp"] = p;
    r.text().str("");
    r.text() << p;
  }
  return r.finish(kExitPositive);
}

json frame_json(const std::vector<FrameCheck>& checks) {
  json a = json::array();
  for (const FrameCheck& c : checks) a.push_back({{"condition", c.condition}, {"holds", c.holds}, {"witness", c.witness}});
  return a;
}

int cmd_correspondence(const Options& o, std::ostream& out) {
  Reporter r(o, "correspondence", out);
  const SearchConfig cfg = config_of(o);
  if (o.formulas.size() != 1) throw UsageError("correspondence expects one schema");
  if (o.frame.empty()) throw UsageError("correspondence requires --frame");
  Signature sig;
  Formula schema = parse_input(o.formulas[0], cfg.logic, sig);
  CorrespondenceReport rep = correspondence(schema, cfg.frame, cfg, o.converse_bound);
  r.doc()["formula"] = print(schema);
  r.doc()["frame"] = to_string(cfg.frame);
  r.doc()["frame_implies_schema"] = rep.frame_implies_schema;
  r.doc()["frame_bound"] = rep.frame_bound;
  if (rep.counterexample) {
    r.doc()["counterexample"] = json::parse(model_to_json(*rep.counterexample));
    r.doc()["counterexample_world"] = rep.counterexample_world;
  }
  r.doc()["converse_fails"] = rep.converse_fails;
  r.doc()["converse_bound"] = rep.converse_bound;
  if (rep.witness) {
    r.doc()["witness"] = json::parse(model_to_json(*rep.witness));
    r.doc()["witness_frame"] = frame_json(rep.witness_frame);
  }
  r.doc()["nodes"] = rep.nodes;
  r.text() << "schema: " << print(schema) << "\n";
  r.text() << to_string(cfg.frame) << " frames up to " << rep.frame_bound
           << " worlds validate the schema: " << (rep.frame_implies_schema ? "yes" : "no") << "\n";
  if (rep.counterexample) {
    r.text() << "counterexample (false at world " << rep.counterexample_world << "):\n"
             << model_text(*rep.counterexample, cfg.logic);
  }
  r.text() << "schema-validating frame violating the condition up to " << rep.converse_bound
           << " worlds: " << (rep.converse_fails ? "found" : "none") << "\n";
  if (rep.witness) {
    r.text() << model_text(*rep.witness, cfg.logic);
    for (const FrameCheck& c : rep.witness_frame) {
      r.text() << "  " << c.condition << ": " << (c.holds ? "holds" : "fails");
      if (!c.holds) {
        r.text() << " at";
        for (int w : c.witness) r.text() << " " << w;
      }
      r.text() << "\n";
    }
  }
  return r.finish(rep.frame_implies_schema ? kExitPositive : kExitNegative);
}

KnowledgeBase load_kb_for(const Options& o) {
  std::string file = o.kb_file;
  if (file.empty()) {
    if (o.formulas.empty()) throw UsageError("missing knowledge base file");
    file = o.formulas[0];
  }
  return load_kb_file(file);
}

void items_out(Reporter& r, const TaskResult& res) {
  json items = json::array();
  for (const GroundItem& it : res.items) {
    json fs = json::array();
    for (const Formula& f : it.formulas) fs.push_back(print(f));
    items.push_back({{"label", it.label}, {"formulas", fs}});
  }
  r.doc()["items"] = items;
}

int cmd_kb_consistency(const Options& o, std::ostream& out) {
  Reporter r(o, "kb consistency", out);
  const SearchConfig cfg = config_of(o);
  const KnowledgeBase kb = load_kb_for(o);
  TaskResult res = consistency(kb, cfg);
  r.verdict(res.verdict, cfg.logic);
  items_out(r, res);
  r.doc()["consistent"] = res.verdict.kind == Verdict::Kind::ModelFound;
  if (!res.mus.empty()) {
    r.doc()["mus"] = res.mus;
    r.text() << "minimal unsatisfiable subset:\n";
    for (const std::string& l : res.mus) r.text() << "  " << l << "\n";
  }
  return r.finish(exit_code(res.verdict.kind));
}

int cmd_kb_entail(const Options& o, std::ostream& out) {
  Reporter r(o, "kb entail", out);
  const SearchConfig cfg = config_of(o);
  const KnowledgeBase kb = load_kb_for(o);
  const std::size_t qi = o.kb_file.empty() ? 1 : 0;
  if (o.formulas.size() != qi + 1) throw UsageError("kb entail expects a knowledge base and one query");
  ParseOptions po;
  po.mode = ParseMode::Any;
  Formula q = parse(o.formulas[qi], kb.signature, po);
  TaskResult res = entailment(kb, q, cfg);
  r.doc()["query"] = print(q);
  r.verdict(res.verdict, cfg.logic);
  items_out(r, res);
  r.doc()["entailed"] = res.verdict.kind == Verdict::Kind::Valid;
  if (res.verdict.kind == Verdict::Kind::CountermodelFound) {
    r.text() << "the countermodel validates:";
    for (const GroundItem& it : res.items) r.text() << " " << it.label;
    r.text() << "\n";
  }
  return r.finish(exit_code(res.verdict.kind));
}

int cmd_kb_comply(const Options& o, std::ostream& out) {
  Reporter r(o, "kb comply", out);
  const SearchConfig cfg = config_of(o);
  const KnowledgeBase kb = load_kb_for(o);
  ComplianceReport rep = compliance(kb, cfg);
  auto list = [](const std::vector<Detachment>& ds) {
    json a = json::array();
    for (const Detachment& d : ds) a.push_back({{"label", d.label}, {"norm", d.norm_id}, {"body", print(d.body)}});
    return a;
  };
  r.doc()["detached"] = list(rep.detached);
  r.doc()["violations"] = list(rep.violations);
  r.doc()["consistent"] = rep.consistent;
  r.doc()["consistency"] = to_string(rep.consistency.verdict.kind);
  if (!rep.consistency.mus.empty()) r.doc()["mus"] = rep.consistency.mus;
  r.doc()["compliant"] = rep.violations.empty();
  r.text() << "detached:\n";
  for (const Detachment& d : rep.detached) r.text() << "  " << d.label << ": " << print(d.body) << "\n";
  r.text() << "violations:" << (rep.violations.empty() ? " none" : "") << "\n";
  for (const Detachment& d : rep.violations) r.text() << "  " << d.label << ": " << print(d.body) << "\n";
  r.text() << "consistency: " << to_string(rep.consistency.verdict.kind) << "\n";
  return r.finish(rep.violations.empty() ? kExitPositive : kExitNegative);
}

void add_search_flags(CLI::App* c, Options& o) {
  c->add_option("--logic", o.logic, "sdl or e")->check(CLI::IsMember({"sdl", "e"}));
  c->add_option("--frame", o.frame, "comma-separated: reflexive,total,transitive,serial");
  c->add_option("--bound", o.bound, "largest model size searched");
  c->add_flag("--complete", o.complete, "decide instead of bounded search");
  c->add_option("--workers", o.workers, "search threads");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"deontic logic workbench", "deon"};
  app.require_subcommand(1);
  auto common = [&](CLI::App* c) {
    c->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));
    c->add_option("--logic", o.logic, "sdl or e")->check(CLI::IsMember({"sdl", "e"}));
  };

  CLI::App* parse_cmd = app.add_subcommand("parse", "parse and print a formula");
  common(parse_cmd);
  parse_cmd->add_option("formula", o.formulas)->required();

  CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate a formula in a model");
  common(eval_cmd);
  eval_cmd->add_option("formula", o.formulas)->required();
  eval_cmd->add_option("--model", o.model_file, "model JSON file")->required();
  eval_cmd->add_option("--world", o.world, "evaluate at this world");

  CLI::App* check_cmd = app.add_subcommand("check", "validity by countermodel search");
  CLI::App* model_cmd = app.add_subcommand("model", "satisfiability of formulas (globally)");
  CLI::App* corr_cmd = app.add_subcommand("correspondence", "schema versus frame condition");
  for (CLI::App* c : {check_cmd, model_cmd, corr_cmd}) {
    c->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));
    add_search_flags(c, o);
    c->add_option("formula", o.formulas)->required();
  }
  corr_cmd->add_option("--converse-bound", o.converse_bound, "size bound for the frame-violating witness");

  CLI::App* tr_cmd = app.add_subcommand("translate", "embedding, normal form and first-order translation");
  common(tr_cmd);
  tr_cmd->add_option("formula", o.formulas)->required();
  tr_cmd->add_flag("--show-steps", o.show_steps, "list every conversion step");
  tr_cmd->add_flag("--tptp", o.tptp, "emit a TPTP problem");
  tr_cmd->add_flag("--local", o.local, "local validity at the actual world");
  tr_cmd->add_option("--name", o.name, "TPTP conjecture name");

  CLI::App* kb_cmd = app.add_subcommand("kb", "knowledge base tasks");
  kb_cmd->require_subcommand(1);
  CLI::App* kb_cons = kb_cmd->add_subcommand("consistency", "consistency, with a minimal unsatisfiable subset");
  CLI::App* kb_ent = kb_cmd->add_subcommand("entail", "entailment of a query");
  CLI::App* kb_comp = kb_cmd->add_subcommand("comply", "detached obligations and violations");
  for (CLI::App* c : {kb_cons, kb_ent, kb_comp}) {
    c->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));
    add_search_flags(c, o);
    c->add_option("--kb", o.kb_file, "knowledge base file");
    c->add_option("args", o.formulas, "knowledge base file, then the query for entail");
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPositive;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPositive;
  } catch (const CLI::ParseError& e) {
    err << "deon: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*parse_cmd) return cmd_parse(o, out);
    if (*eval_cmd) return cmd_eval(o, out);
    if (*check_cmd) return cmd_check(o, out);
    if (*model_cmd) return cmd_model(o, out);
    if (*tr_cmd) return cmd_translate(o, out);
    if (*corr_cmd) return cmd_correspondence(o, out);
    if (*kb_cons) return cmd_kb_consistency(o, out);
    if (*kb_ent) return cmd_kb_entail(o, out);
    if (*kb_comp) return cmd_kb_comply(o, out);
  } catch (const SearchError& e) {
    err << "deon: " << e.what() << "\n";
    return kExitUndetermined;
  } catch (const std::exception& e) {
    err << "deon: " << e.what() << "\n";
    return kExitUsage;
  }
  err << "deon: no command\n";
  return kExitUsage;
}

}  // namespace deon
