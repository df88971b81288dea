#include "deon/kb.h"

#include <fstream>
#include <functional>
#include <map>
#include <regex>
#include <set>
#include <sstream>

namespace deon {

std::string_view to_string(Norm::Kind k) {
  switch (k) {
    case Norm::Kind::Obligation: return "obligation";
    case Norm::Kind::Permission: return "permission";
    case Norm::Kind::Prohibition: return "prohibition";
  }
  return "?";
}

KbError::KbError(const std::string& msg, int line)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_names(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

Formula parse_at(const std::string& text, const Signature& sig, int line, std::vector<std::string> bound = {}) {
  ParseOptions opts;
  opts.mode = ParseMode::Any;
  opts.bound = std::move(bound);
  try {
    return parse(text, sig, opts);
  } catch (const ParseError& e) {
    throw KbError(std::string(e.what()) + " in '" + text + "'", line);
  } catch (const std::invalid_argument& e) {
    throw KbError(std::string(e.what()) + " in '" + text + "'", line);
  }
}

Norm parse_norm(const std::string& text, const Signature& sig, int line) {
  static const std::regex re(R"(^([A-Za-z0-9_]+)\s*:\s*([OPF])\s*\{(.*)\}\s*(?:forall\s+(.+))?$)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) {
    throw KbError("expected '<id>: O{ body | cond } [forall vars]', got '" + text + "'", line);
  }
  Norm n;
  n.id = m[1];
  n.line = line;
  const char k = m[2].str()[0];
  n.kind = k == 'O' ? Norm::Kind::Obligation : k == 'P' ? Norm::Kind::Permission : Norm::Kind::Prohibition;
  if (m[4].matched) n.binders = split_names(m[4]);
  std::set<std::string> seen;
  for (const std::string& v : n.binders) {
    if (!Signature::valid_name(v)) throw KbError("invalid binder '" + v + "'", line);
    if (sig.has_constant(v) || sig.has_predicate(v)) throw KbError("binder '" + v + "' clashes with the signature", line);
    if (!seen.insert(v).second) throw KbError("duplicate binder '" + v + "'", line);
  }
  const std::string inner = m[3];
  Formula f = Formula::top();
  try {
    ParseOptions opts;
    opts.mode = ParseMode::Any;
    opts.bound = n.binders;
    f = parse("O{" + inner + "}", sig, opts);
  } catch (const std::exception&) {
    f = parse_at("O{(" + inner + ") | true}", sig, line, n.binders);
  }
  if (f.op() != Op::Oblig) throw KbError("malformed norm '" + text + "'", line);
  n.body = f.lhs();
  n.condition = f.rhs();
  std::set<std::string> free = free_vars(n.body);
  for (const std::string& v : free_vars(n.condition)) free.insert(v);
  for (const std::string& v : free) {
    if (!seen.count(v)) throw KbError("variable '" + v + "' is not bound by the norm", line);
  }
  return n;
}

}  // namespace

KnowledgeBase load_kb(std::string_view text) {
  KnowledgeBase kb;
  enum class Section { None, Signature, Individuals, Norms, Facts, Background } section = Section::None;
  struct Pending {
    Section section;
    std::string text;
    int line;
  };
  std::vector<Pending> pending;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  std::set<std::string> individuals;
  while (std::getline(in, raw)) {
    ++line;
    if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
    const std::string s = trim(raw);
    if (s.empty()) continue;
    if (s.front() == '[') {
      static const std::map<std::string, Section> names{{"[signature]", Section::Signature},
                                                        {"[individuals]", Section::Individuals},
                                                        {"[norms]", Section::Norms},
                                                        {"[facts]", Section::Facts},
                                                        {"[background]", Section::Background}};
      auto it = names.find(s);
      if (it == names.end()) throw KbError("unknown section " + s, line);
      section = it->second;
      continue;
    }
    switch (section) {
      case Section::None: throw KbError("content before the first section header", line);
      case Section::Signature: {
        static const std::regex pred(R"(^pred\s+([A-Za-z0-9_]+)\s*/\s*([0-9]+)$)");
        static const std::regex cnst(R"(^const\s+(.+)$)");
        std::smatch m;
        try {
          if (std::regex_match(s, m, pred)) {
            kb.signature.add_predicate(m[1], std::stoi(m[2]));
          } else if (std::regex_match(s, m, cnst)) {
            for (const std::string& c : split_names(m[1])) kb.signature.add_constant(c);
          } else {
            throw KbError("expected 'pred <name>/<arity>' or 'const <name>', got '" + s + "'", line);
          }
        } catch (const std::invalid_argument& e) {
          throw KbError(e.what(), line);
        }
        break;
      }
      case Section::Individuals:
        for (const std::string& c : split_names(s)) {
          if (!individuals.insert(c).second) throw KbError("duplicate individual '" + c + "'", line);
          try {
            kb.signature.add_constant(c);
          } catch (const std::invalid_argument& e) {
            throw KbError(e.what(), line);
          }
          kb.individuals.push_back(c);
        }
        break;
      default:
        pending.push_back({section, s, line});
    }
  }
  // Formulas are parsed once the whole signature is known.
  std::set<std::string> ids;
  for (const Pending& p : pending) {
    if (p.section == Section::Norms) {
      Norm n = parse_norm(p.text, kb.signature, p.line);
      if (!ids.insert(n.id).second) throw KbError("duplicate norm id '" + n.id + "'", p.line);
      kb.norms.push_back(std::move(n));
      continue;
    }
    Formula f = parse_at(p.text, kb.signature, p.line);
    if (!is_closed(f)) throw KbError("formula has free variables: " + p.text, p.line);
    if (p.section == Section::Facts) {
      if (!is_propositional(f)) throw KbError("facts must not contain modal operators: " + p.text, p.line);
      kb.facts.push_back(f);
    } else {
      kb.background.push_back(f);
    }
  }
  return kb;
}

KnowledgeBase load_kb_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw KbError("cannot open " + path, 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_kb(ss.str());
}

namespace {

Formula close_over(const KnowledgeBase& kb, const Formula& f) {
  if (is_ground(f)) return f;
  if (kb.individuals.empty()) throw KbError("quantified formula needs at least one individual: " + print(f), 0);
  return ground(f, kb.individuals);
}

std::vector<Formula> render_norm(const Norm::Kind kind, const Formula& b, const Formula& c, Logic logic) {
  const Formula nb = Formula::negation(b);
  if (logic == Logic::E) {
    switch (kind) {
      case Norm::Kind::Obligation: return {Formula::oblig(b, c)};
      case Norm::Kind::Permission: return {Formula::negation(Formula::oblig(nb, c))};
      case Norm::Kind::Prohibition: return {Formula::oblig(nb, c)};
    }
  }
  if (kind == Norm::Kind::Permission) {
    if (c.is_top()) return {Formula::perm(b)};
    return {Formula::implies(c, Formula::perm(b))};
  }
  const Formula body = kind == Norm::Kind::Obligation ? b : nb;
  if (c.is_top()) return {Formula::oblig_m(body)};
  return {Formula::implies(c, Formula::oblig_m(body)), Formula::oblig_m(Formula::implies(c, body))};
}

struct Instance {
  const Norm* norm;
  std::string label;
  Formula body;
  Formula condition;
};

std::vector<Instance> instances(const KnowledgeBase& kb) {
  std::vector<Instance> out;
  for (const Norm& n : kb.norms) {
    if (!n.binders.empty() && kb.individuals.empty()) {
      throw KbError("norm " + n.id + " has binders but there are no individuals", n.line);
    }
    std::vector<std::size_t> pick(n.binders.size(), 0);
    while (true) {
      Formula b = n.body;
      Formula c = n.condition;
      std::string label = n.id;
      for (std::size_t i = 0; i < n.binders.size(); ++i) {
        const std::string& ind = kb.individuals[pick[i]];
        b = substitute(b, n.binders[i], Term::constant(ind));
        c = substitute(c, n.binders[i], Term::constant(ind));
        label += (i ? "," : "[") + n.binders[i] + "=" + ind;
      }
      if (!n.binders.empty()) label += "]";
      out.push_back({&n, label, close_over(kb, b), close_over(kb, c)});
      std::size_t k = 0;
      while (k < pick.size() && ++pick[k] == kb.individuals.size()) pick[k++] = 0;
      if (k == pick.size()) break;
    }
  }
  return out;
}

}  // namespace

std::vector<GroundItem> ground_items(const KnowledgeBase& kb, Logic logic) {
  std::vector<GroundItem> items;
  for (const Instance& in : instances(kb)) {
    items.push_back({in.label, in.norm->id, render_norm(in.norm->kind, in.body, in.condition, logic)});
  }
  for (const Formula& f : kb.facts) {
    Formula g = close_over(kb, f);
    items.push_back({"fact:" + print(f), "", {logic == Logic::E ? Formula::box(g) : g}});
  }
  for (const Formula& f : kb.background) {
    Formula g = close_over(kb, f);
    try {
      g = to_language(g, logic);
    } catch (const std::invalid_argument& e) {
      throw KbError(std::string(e.what()) + ": " + print(f), 0);
    }
    items.push_back({"background:" + print(f), "", {g}});
  }
  return items;
}

std::vector<Formula> ground_kb(const KnowledgeBase& kb, Logic logic) {
  std::vector<Formula> out;
  for (const GroundItem& it : ground_items(kb, logic)) out.insert(out.end(), it.formulas.begin(), it.formulas.end());
  return out;
}

Formula ground_query(const KnowledgeBase& kb, const Formula& query, Logic logic) {
  if (!is_closed(query)) throw KbError("query has free variables: " + print(query), 0);
  return to_language(close_over(kb, query), logic);
}

namespace {

std::vector<std::string> model_domain(const KnowledgeBase& kb) {
  const auto& c = kb.signature.constants();
  return {c.begin(), c.end()};
}

}  // namespace

TaskResult consistency(const KnowledgeBase& kb, const SearchConfig& cfg) {
  TaskResult r;
  r.items = ground_items(kb, cfg.logic);
  std::vector<std::vector<Formula>> groups;
  std::vector<Formula> all;
  for (const GroundItem& it : r.items) {
    groups.push_back(it.formulas);
    all.insert(all.end(), it.formulas.begin(), it.formulas.end());
  }
  r.verdict = find_model(all, cfg);
  if (r.verdict.model) r.verdict.model->domain = model_domain(kb);
  if (r.verdict.kind == Verdict::Kind::DecidedUnsatisfiable) {
    for (std::size_t i : minimal_unsat_subset(groups, cfg)) r.mus.push_back(r.items[i].label);
  }
  return r;
}

TaskResult entailment(const KnowledgeBase& kb, const Formula& query, const SearchConfig& cfg) {
  TaskResult r;
  r.items = ground_items(kb, cfg.logic);
  r.verdict = entails(ground_kb(kb, cfg.logic), ground_query(kb, query, cfg.logic), cfg);
  if (r.verdict.model) r.verdict.model->domain = model_domain(kb);
  return r;
}

namespace {

bool prop_value(const Formula& f, const std::map<std::string, bool>& v) {
  switch (f.op()) {
    case Op::Atom:
      if (f.name() == kTopAtom) return false;
      return v.at(atom_key(f.name(), f.args()));
    case Op::Not: return !prop_value(f.lhs(), v);
    case Op::And: return prop_value(f.lhs(), v) && prop_value(f.rhs(), v);
    case Op::Or: return prop_value(f.lhs(), v) || prop_value(f.rhs(), v);
    case Op::Implies: return !prop_value(f.lhs(), v) || prop_value(f.rhs(), v);
    case Op::Iff: return prop_value(f.lhs(), v) == prop_value(f.rhs(), v);
    default: throw std::invalid_argument("not a ground propositional formula: " + print(f));
  }
}

// Calls `visit` on every assignment satisfying the premises; stops when it returns false.
void for_each_model(const std::vector<Formula>& fs, const std::vector<Formula>& extra,
                    const std::function<bool(const std::map<std::string, bool>&)>& visit) {
  std::set<std::string> atoms;
  for (const auto* list : {&fs, &extra}) {
    for (const Formula& f : *list) {
      if (!is_ground(f) || !is_propositional(f)) throw std::invalid_argument("not a ground propositional formula: " + print(f));
      auto a = ground_atoms(f);
      atoms.insert(a.begin(), a.end());
    }
  }
  if (atoms.size() > 24) throw std::invalid_argument("too many atoms for a truth table");
  std::vector<std::string> names(atoms.begin(), atoms.end());
  std::map<std::string, bool> v;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << names.size()); ++bits) {
    for (std::size_t i = 0; i < names.size(); ++i) v[names[i]] = (bits >> i) & 1u;
    bool ok = true;
    for (const Formula& f : fs) {
      if (!prop_value(f, v)) {
        ok = false;
        break;
      }
    }
    if (ok && !visit(v)) return;
  }
}

}  // namespace

bool propositionally_entails(const std::vector<Formula>& premises, const Formula& goal) {
  bool holds = true;
  for_each_model(premises, {goal}, [&](const std::map<std::string, bool>& v) {
    if (!prop_value(goal, v)) holds = false;
    return holds;
  });
  return holds;
}

ComplianceReport compliance(const KnowledgeBase& kb, const SearchConfig& cfg) {
  std::vector<Formula> facts;
  for (const Formula& f : kb.facts) facts.push_back(close_over(kb, f));
  bool satisfiable = false;
  for_each_model(facts, {}, [&](const std::map<std::string, bool>&) {
    satisfiable = true;
    return false;
  });
  if (!satisfiable) throw KbError("facts are propositionally contradictory", 0);

  ComplianceReport rep;
  for (const Instance& in : instances(kb)) {
    if (in.norm->kind == Norm::Kind::Permission) continue;
    if (!is_propositional(in.condition) || !is_propositional(in.body)) continue;
    if (!propositionally_entails(facts, in.condition)) continue;
    Formula body = in.norm->kind == Norm::Kind::Obligation ? in.body : Formula::negation(in.body);
    Detachment d{in.label, in.norm->id, body};
    rep.detached.push_back(d);
    if (propositionally_entails(facts, Formula::negation(body))) rep.violations.push_back(d);
  }
  rep.consistency = consistency(kb, cfg);
  rep.consistent = rep.consistency.verdict.kind == Verdict::Kind::ModelFound;
  return rep;
}

}  // namespace deon
