#include "deon/embed.h"

#include <atomic>
#include <cctype>
#include <functional>
#include <sstream>

namespace deon {

namespace {

const SimpleType& tau() {
  static const SimpleType t = SimpleType::prop();
  return t;
}
SimpleType tau_to_tau() { return SimpleType::arrow(tau(), tau()); }
SimpleType tau_to_tau_to_tau() { return SimpleType::arrow(tau(), tau_to_tau()); }

LTerm wvar(const std::string& n) { return LTerm::var(n, SimpleType::i()); }
LTerm phi(const std::string& n) { return LTerm::var(n, tau()); }
LTerm at(const LTerm& f, const LTerm& w) { return LTerm::app(f, w); }

LTerm relation(const char* name) {
  return LTerm::constant(name, SimpleType::arrows({SimpleType::i(), SimpleType::i()}, SimpleType::o()));
}

// ---------------------------------------------------------------------------
// Lifted connectives and quantifiers, shared by both logics.

LTerm lifted_not() {
  static const LTerm t = LTerm::defined(
      "¬'", tau_to_tau(), LTerm::lam("φ", tau(), LTerm::lam("w", SimpleType::i(), hol::neg(at(phi("φ"), wvar("w"))))));
  return t;
}

LTerm lifted_binary(const char* name, LTerm (*op)(const LTerm&, const LTerm&)) {
  LTerm w = wvar("w");
  return LTerm::defined(
      std::string(name) + "'", tau_to_tau_to_tau(),
      LTerm::lam("φ", tau(),
                 LTerm::lam("ψ", tau(), LTerm::lam("w", SimpleType::i(), op(at(phi("φ"), w), at(phi("ψ"), w))))));
}

LTerm lifted_or() {
  static const LTerm t = lifted_binary(hol::kOr, hol::disj);
  return t;
}
LTerm lifted_and() {
  static const LTerm t = lifted_binary(hol::kAnd, hol::conj);
  return t;
}
LTerm lifted_imp() {
  static const LTerm t = lifted_binary(hol::kImp, hol::imp);
  return t;
}
LTerm lifted_iff() {
  static const LTerm t = lifted_binary(hol::kIff, hol::iff);
  return t;
}

SimpleType indiv_prop() { return SimpleType::arrow(SimpleType::e(), tau()); }

// Pi' = \Phi. \w. Pi(\x. Phi x w), and the existential analogue.
LTerm lifted_quantifier(bool universal) {
  LTerm big_phi = LTerm::var("Φ", indiv_prop());
  LTerm x = LTerm::var("x", SimpleType::e());
  LTerm w = wvar("w");
  LTerm body = LTerm::app(big_phi, {x, w});
  LTerm q = universal ? hol::forall("x", SimpleType::e(), body) : hol::exists("x", SimpleType::e(), body);
  return LTerm::defined(universal ? "Π'" : "∃'", SimpleType::arrow(indiv_prop(), tau()),
                        LTerm::lam("Φ", indiv_prop(), LTerm::lam("w", SimpleType::i(), q)));
}

LTerm lifted_forall() {
  static const LTerm t = lifted_quantifier(true);
  return t;
}
LTerm lifted_exists() {
  static const LTerm t = lifted_quantifier(false);
  return t;
}

LTerm app1(const LTerm& c, const LTerm& a) { return LTerm::app(c, a); }
LTerm app2(const LTerm& c, const LTerm& a, const LTerm& b) { return LTerm::app(c, {a, b}); }

LTerm sdl_oblig() {
  static const LTerm t = LTerm::defined("○", tau_to_tau(), sdl_box().definiens());
  return t;
}
LTerm sdl_perm() {
  static const LTerm t = LTerm::defined(
      "P", tau_to_tau(), LTerm::lam("φ", tau(), app1(lifted_not(), app1(sdl_oblig(), app1(lifted_not(), phi("φ"))))));
  return t;
}
LTerm sdl_forb() {
  static const LTerm t =
      LTerm::defined("F", tau_to_tau(), LTerm::lam("φ", tau(), app1(sdl_oblig(), app1(lifted_not(), phi("φ")))));
  return t;
}

LTerm e_dia() {
  static const LTerm t = LTerm::defined(
      "◇", tau_to_tau(),
      LTerm::lam("φ", tau(), LTerm::lam("x", SimpleType::i(), hol::exists("y", SimpleType::i(), at(phi("φ"), wvar("y"))))));
  return t;
}

LTerm top_term() {
  LTerm t = LTerm::constant(std::string(kTopAtom), tau());
  return app2(lifted_or(), t, app1(lifted_not(), t));
}

LTerm e_oblig_m() {
  static const LTerm t =
      LTerm::defined("○₁", tau_to_tau(), LTerm::lam("φ", tau(), app2(e_oblig(), phi("φ"), top_term())));
  return t;
}
LTerm e_perm() {
  static const LTerm t = LTerm::defined(
      "P", tau_to_tau(),
      LTerm::lam("φ", tau(), app1(lifted_not(), app2(e_oblig(), app1(lifted_not(), phi("φ")), top_term()))));
  return t;
}
LTerm e_forb() {
  static const LTerm t = LTerm::defined(
      "F", tau_to_tau(), LTerm::lam("φ", tau(), app2(e_oblig(), app1(lifted_not(), phi("φ")), top_term())));
  return t;
}

void check_reserved(const Formula& f) {
  for (const Formula& g : subformulas(f)) {
    if (!g.is_atom()) continue;
    if (g.name() == kAccess || g.name() == kBetter) {
      throw std::invalid_argument("predicate name '" + g.name() + "' is reserved for the frame relation");
    }
    for (const Term& t : g.args()) {
      if (t.name == kActualWorld) throw std::invalid_argument("constant name 'aw' is reserved");
    }
  }
}

LTerm embed_atom(const Formula& f) {
  if (f.args().empty()) return LTerm::constant(f.name(), tau());
  std::vector<SimpleType> arg_types(f.args().size(), SimpleType::e());
  arg_types.push_back(SimpleType::i());
  LTerm head = LTerm::constant(f.name(), SimpleType::arrows(arg_types, SimpleType::o()));
  std::vector<LTerm> args;
  for (const Term& t : f.args()) {
    args.push_back(t.is_var() ? LTerm::var(t.name, SimpleType::e()) : LTerm::constant(t.name, SimpleType::e()));
  }
  LTerm w = wvar("w");
  args.push_back(w);
  return LTerm::lam("w", SimpleType::i(), LTerm::app(head, args));
}

LTerm embed_rec(const Formula& f, Logic logic) {
  auto rec = [&](const Formula& g) { return embed_rec(g, logic); };
  bool sdl = logic == Logic::Sdl;
  switch (f.op()) {
    case Op::Atom: return embed_atom(f);
    case Op::Not: return app1(lifted_not(), rec(f.lhs()));
    case Op::And: return app2(lifted_and(), rec(f.lhs()), rec(f.rhs()));
    case Op::Or: return app2(lifted_or(), rec(f.lhs()), rec(f.rhs()));
    case Op::Implies: return app2(lifted_imp(), rec(f.lhs()), rec(f.rhs()));
    case Op::Iff: return app2(lifted_iff(), rec(f.lhs()), rec(f.rhs()));
    case Op::Box: return app1(sdl ? sdl_box() : e_box(), rec(f.lhs()));
    case Op::Dia: return app1(sdl ? sdl_dia() : e_dia(), rec(f.lhs()));
    case Op::Oblig:
      if (sdl) throw std::invalid_argument("dyadic obligation is not part of SDL: " + print(f));
      return app2(e_oblig(), rec(f.lhs()), rec(f.rhs()));
    case Op::ObligM: return app1(sdl ? sdl_oblig() : e_oblig_m(), rec(f.lhs()));
    case Op::Perm: return app1(sdl ? sdl_perm() : e_perm(), rec(f.lhs()));
    case Op::Forb: return app1(sdl ? sdl_forb() : e_forb(), rec(f.lhs()));
    case Op::Forall:
    case Op::Exists: {
      LTerm body = LTerm::lam(f.name(), SimpleType::e(), rec(f.lhs()));
      return app1(f.op() == Op::Forall ? lifted_forall() : lifted_exists(), body);
    }
  }
  throw std::logic_error("unhandled operator");
}

}  // namespace

LTerm sdl_box() {
  LTerm w = wvar("w");
  LTerm v = wvar("v");
  static const LTerm t = LTerm::defined(
      "□", tau_to_tau(),
      LTerm::lam("φ", tau(),
                 LTerm::lam("w", SimpleType::i(),
                            hol::forall("v", SimpleType::i(),
                                        hol::disj(hol::neg(LTerm::app(relation(kAccess), {w, v})), at(phi("φ"), v))))));
  return t;
}

LTerm sdl_dia() {
  LTerm w = wvar("w");
  LTerm v = wvar("v");
  static const LTerm t = LTerm::defined(
      "◇", tau_to_tau(),
      LTerm::lam("φ", tau(),
                 LTerm::lam("w", SimpleType::i(),
                            hol::exists("v", SimpleType::i(),
                                        hol::conj(LTerm::app(relation(kAccess), {w, v}), at(phi("φ"), v))))));
  return t;
}

LTerm e_box() {
  static const LTerm t = LTerm::defined(
      "□", tau_to_tau(),
      LTerm::lam("φ", tau(), LTerm::lam("x", SimpleType::i(), hol::forall("y", SimpleType::i(), at(phi("φ"), wvar("y"))))));
  return t;
}

LTerm e_oblig() {
  LTerm v = wvar("v");
  LTerm w = wvar("w");
  LTerm y = wvar("y");
  LTerm f = phi("φ");
  static const LTerm t = [&] {
    LTerm best = LTerm::lam(
        "v", SimpleType::i(),
        hol::conj(at(f, v), hol::forall("y", SimpleType::i(),
                                        hol::imp(at(f, y), LTerm::app(relation(kBetter), {v, y})))));
    LTerm body = hol::forall("w", SimpleType::i(), hol::imp(at(best, w), at(phi("ψ"), w)));
    return LTerm::defined("○", tau_to_tau_to_tau(),
                          LTerm::lam("ψ", tau(), LTerm::lam("φ", tau(), LTerm::lam("x", SimpleType::i(), body))));
  }();
  return t;
}

LTerm embed_sdl(const Formula& f) { return embed(f, Logic::Sdl); }
LTerm embed_e(const Formula& f) { return embed(f, Logic::E); }

LTerm embed(const Formula& f, Logic logic) {
  check_reserved(f);
  return embed_rec(f, logic);
}

LTerm vld(const LTerm& t) {
  SimpleType ty = type_of(t);
  if (!(ty == tau())) throw TypeError("vld expects a term of type i→o, got " + ty.str());
  return hol::forall("z", SimpleType::i(), at(t, wvar("z")));
}

LTerm local(const LTerm& t) {
  SimpleType ty = type_of(t);
  if (!(ty == tau())) throw TypeError("local validity expects a term of type i→o, got " + ty.str());
  return at(t, LTerm::constant(kActualWorld, SimpleType::i()));
}

// ---------------------------------------------------------------------------
// First-order formulas

FOFormula FOFormula::pred(std::string name, std::vector<FOTerm> args) {
  FOFormula f;
  f.kind = Kind::Pred;
  f.name = std::move(name);
  f.args = std::move(args);
  return f;
}
FOFormula FOFormula::unary(Kind k, FOFormula a) {
  FOFormula f;
  f.kind = k;
  f.sub.push_back(std::move(a));
  return f;
}
FOFormula FOFormula::binary(Kind k, FOFormula a, FOFormula b) {
  FOFormula f;
  f.kind = k;
  f.sub.push_back(std::move(a));
  f.sub.push_back(std::move(b));
  return f;
}
FOFormula FOFormula::quant(Kind k, std::string var, Sort sort, FOFormula body) {
  FOFormula f;
  f.kind = k;
  f.name = std::move(var);
  f.sort = sort;
  f.sub.push_back(std::move(body));
  return f;
}

std::set<std::string> fo_free_vars(const FOFormula& f) {
  std::set<std::string> out;
  switch (f.kind) {
    case FOFormula::Kind::Pred:
      for (const FOTerm& t : f.args) {
        if (t.is_var) out.insert(t.name);
      }
      break;
    case FOFormula::Kind::Forall:
    case FOFormula::Kind::Exists:
      out = fo_free_vars(f.sub[0]);
      out.erase(f.name);
      break;
    default:
      for (const FOFormula& g : f.sub) {
        auto s = fo_free_vars(g);
        out.insert(s.begin(), s.end());
      }
  }
  return out;
}

namespace {

std::atomic<unsigned long> lower_counter{0};

struct Lowerer {
  std::map<std::string, Sort> sorts;  // opened binder variables

  static std::pair<LTerm, std::vector<LTerm>> spine(const LTerm& t) {
    std::vector<LTerm> args;
    LTerm h = t;
    while (h.is(LTerm::Kind::App)) {
      args.push_back(h.arg());
      h = h.fun();
    }
    return {h, std::vector<LTerm>(args.rbegin(), args.rend())};
  }

  static bool is_prim(const LTerm& h, const char* n) {
    return h.is(LTerm::Kind::Const) && !h.is_defined() && h.name() == n;
  }

  FOTerm term(const LTerm& t) {
    SimpleType ty = type_of(t);
    if (ty.is_arrow() || ty.kind() == SimpleType::Kind::O) {
      throw HigherOrderResidue("argument of non-individual, non-world type " + ty.str() + ": " + to_string(t));
    }
    Sort s = ty.kind() == SimpleType::Kind::I ? Sort::World : Sort::Indiv;
    if (t.is(LTerm::Kind::Free)) {
      if (!sorts.count(t.name())) throw HigherOrderResidue("unbound variable " + t.name());
      return {t.name(), s, true};
    }
    if (t.is(LTerm::Kind::Const)) return {t.name(), s, false};
    throw HigherOrderResidue("compound argument: " + to_string(t));
  }

  FOFormula quantifier(FOFormula::Kind kind, const SimpleType& dom, const LTerm& pred, bool strip_negation) {
    Sort s;
    if (dom.kind() == SimpleType::Kind::I) s = Sort::World;
    else if (dom.kind() == SimpleType::Kind::E) s = Sort::Indiv;
    else throw HigherOrderResidue("quantification over type " + dom.str());
    std::string v = "%q" + std::to_string(lower_counter.fetch_add(1));
    LTerm var = LTerm::var(v, dom);
    LTerm body = pred.is(LTerm::Kind::Abs) ? LTerm::open(pred.body(), var) : LTerm::app(pred, var);
    if (strip_negation) body = spine(body).second[0];
    sorts[v] = s;
    FOFormula fb = lower(body);
    sorts.erase(v);
    if (!fo_free_vars(fb).count(v)) return fb;
    return FOFormula::quant(kind, v, s, std::move(fb));
  }

  // Matches Pi(\v. ~X) under a negation.
  static bool negated_pi(const LTerm& a) {
    auto [h, args] = spine(a);
    if (!is_prim(h, hol::kPi) || args.size() != 1 || !args[0].is(LTerm::Kind::Abs)) return false;
    auto [h2, args2] = spine(args[0].body());
    return is_prim(h2, hol::kNot) && args2.size() == 1;
  }

  FOFormula lower(const LTerm& t) {
    auto [h, args] = spine(t);
    if (h.is(LTerm::Kind::Abs)) throw std::invalid_argument("term is not beta-normal: " + to_string(t));
    if (h.is(LTerm::Kind::Const) && h.is_defined()) {
      throw std::invalid_argument("term contains the defined constant " + h.name());
    }
    if (h.is(LTerm::Kind::Const) && hol::is_logical_constant(h)) {
      using K = FOFormula::Kind;
      const std::string& n = h.name();
      if (n == hol::kNot && args.size() == 1) {
        if (negated_pi(args[0])) {
          LTerm abs = spine(args[0]).second[0];
          return quantifier(K::Exists, abs.type(), abs, true);
        }
        return FOFormula::unary(K::Not, lower(args[0]));
      }
      if (args.size() == 2) {
        K k = n == hol::kAnd ? K::And : n == hol::kOr ? K::Or : n == hol::kImp ? K::Implies : K::Iff;
        if (n == hol::kAnd || n == hol::kOr || n == hol::kImp || n == hol::kIff) {
          return FOFormula::binary(k, lower(args[0]), lower(args[1]));
        }
      }
      if (n == hol::kPi && args.size() == 1) {
        return quantifier(K::Forall, h.type().from().from(), args[0], false);
      }
      throw HigherOrderResidue("unexpected use of " + n + ": " + to_string(t));
    }
    if (h.is(LTerm::Kind::Const)) {
      std::vector<FOTerm> fargs;
      for (const LTerm& a : args) fargs.push_back(term(a));
      return FOFormula::pred(h.name(), std::move(fargs));
    }
    throw HigherOrderResidue("variable in predicate position: " + to_string(t));
  }
};

FOFormula rename(const FOFormula& f, int worlds, int indivs, std::map<std::string, std::string>& names) {
  FOFormula out = f;
  switch (f.kind) {
    case FOFormula::Kind::Pred:
      for (FOTerm& t : out.args) {
        if (t.is_var) t.name = names.at(t.name);
      }
      return out;
    case FOFormula::Kind::Forall:
    case FOFormula::Kind::Exists: {
      std::string fresh = f.sort == Sort::World ? "W" + std::to_string(worlds++) : "X" + std::to_string(indivs++);
      auto saved = names.find(f.name) != names.end() ? std::optional(names[f.name]) : std::nullopt;
      names[f.name] = fresh;
      out.name = fresh;
      out.sub[0] = rename(f.sub[0], worlds, indivs, names);
      if (saved) names[f.name] = *saved;
      else names.erase(f.name);
      return out;
    }
    default:
      for (FOFormula& g : out.sub) g = rename(g, worlds, indivs, names);
      return out;
  }
}

}  // namespace

FOFormula lower(const LTerm& t) {
  SimpleType ty = type_of(t);
  if (!(ty == SimpleType::o())) throw TypeError("lower expects a term of type o, got " + ty.str());
  Lowerer l;
  FOFormula raw = l.lower(t);
  std::map<std::string, std::string> names;
  return rename(raw, 0, 0, names);
}

FOFormula translate(const Formula& f, Logic logic, bool local_validity) {
  LTerm e = embed(f, logic);
  return lower(normalize(local_validity ? local(e) : vld(e)));
}

namespace {

bool is_access_guard(const FOFormula& g, const std::set<std::string>& needed) {
  if (g.kind != FOFormula::Kind::Pred || (g.name != kAccess && g.name != kBetter)) return false;
  std::set<std::string> have;
  for (const FOTerm& t : g.args) {
    if (t.is_var) have.insert(t.name);
  }
  for (const std::string& v : needed) {
    if (!have.count(v)) return false;
  }
  return true;
}

}  // namespace

bool is_guarded(const FOFormula& f) {
  using K = FOFormula::Kind;
  switch (f.kind) {
    case K::True:
    case K::False:
    case K::Pred:
      return true;
    case K::Forall:
    case K::Exists: {
      const FOFormula& b = f.sub[0];
      std::set<std::string> fv = fo_free_vars(b);
      if (fv.size() <= 1) return is_guarded(b);
      std::optional<FOFormula> guard;
      std::optional<FOFormula> rest;
      if (f.kind == K::Forall && b.kind == K::Or && b.sub[0].kind == K::Not) {
        guard = b.sub[0].sub[0];
        rest = b.sub[1];
      } else if (f.kind == K::Forall && b.kind == K::Implies) {
        guard = b.sub[0];
        rest = b.sub[1];
      } else if (f.kind == K::Exists && b.kind == K::And) {
        guard = b.sub[0];
        rest = b.sub[1];
      }
      return guard && is_access_guard(*guard, fv) && is_guarded(*rest);
    }
    default:
      for (const FOFormula& g : f.sub) {
        if (!is_guarded(g)) return false;
      }
      return true;
  }
}

// ---------------------------------------------------------------------------
// FO evaluation

namespace {

struct FOEval {
  const Model& m;
  int actual;
  std::map<std::string, int> env;

  int world_of(const FOTerm& t) const {
    if (t.is_var) return env.at(t.name);
    if (t.name == kActualWorld) return actual;
    throw EvalError("unknown world constant " + t.name);
  }

  std::string indiv_of(const FOTerm& t) const {
    if (t.is_var) return m.domain.at(static_cast<std::size_t>(env.at(t.name)));
    return t.name;
  }

  bool run(const FOFormula& f) {
    using K = FOFormula::Kind;
    switch (f.kind) {
      case K::True: return true;
      case K::False: return false;
      case K::Pred: {
        if ((f.name == kAccess || f.name == kBetter) && f.args.size() == 2) {
          return m.related(world_of(f.args[0]), world_of(f.args[1]));
        }
        if (f.name == kTopAtom) return false;
        if (f.args.empty() || f.args.back().sort != Sort::World) {
          throw EvalError("predicate without world argument: " + f.name);
        }
        std::vector<Term> ind;
        for (std::size_t i = 0; i + 1 < f.args.size(); ++i) ind.push_back(Term::constant(indiv_of(f.args[i])));
        std::string key = atom_key(f.name, ind);
        auto truth = m.atom(key);
        if (!truth) throw EvalError("atom not in valuation: " + key);
        return contains(*truth, world_of(f.args.back()));
      }
      case K::Not: return !run(f.sub[0]);
      case K::And: return run(f.sub[0]) && run(f.sub[1]);
      case K::Or: return run(f.sub[0]) || run(f.sub[1]);
      case K::Implies: return !run(f.sub[0]) || run(f.sub[1]);
      case K::Iff: return run(f.sub[0]) == run(f.sub[1]);
      case K::Forall:
      case K::Exists: {
        int size = f.sort == Sort::World ? m.worlds : static_cast<int>(m.domain.size());
        bool universal = f.kind == K::Forall;
        auto saved = env.find(f.name) != env.end() ? std::optional(env[f.name]) : std::nullopt;
        bool result = universal;
        for (int k = 0; k < size; ++k) {
          env[f.name] = k;
          if (run(f.sub[0]) != universal) {
            result = !universal;
            break;
          }
        }
        if (saved) env[f.name] = *saved;
        else env.erase(f.name);
        return result;
      }
    }
    return false;
  }
};

}  // namespace

bool fo_eval(const FOFormula& f, const Model& m, int actual_world) {
  FOEval e{m, actual_world, {}};
  return e.run(f);
}

// ---------------------------------------------------------------------------
// Printing

namespace {

int fo_level(const FOFormula& f) {
  using K = FOFormula::Kind;
  switch (f.kind) {
    case K::Iff: return 1;
    case K::Implies: return 2;
    case K::Or: return 3;
    case K::And: return 4;
    case K::Not: return 5;
    case K::Forall:
    case K::Exists: return 0;
    default: return 6;
  }
}

void fo_print(std::ostream& os, const FOFormula& f, int min_level, bool rightmost) {
  using K = FOFormula::Kind;
  int lv = fo_level(f);
  bool parens = lv < min_level && !(lv == 0 && rightmost);
  if (parens) {
    os << '(';
    rightmost = true;
  }
  switch (f.kind) {
    case K::True: os << "⊤"; break;
    case K::False: os << "⊥"; break;
    case K::Pred:
      os << f.name;
      if (!f.args.empty()) {
        os << '(';
        for (std::size_t i = 0; i < f.args.size(); ++i) os << (i ? "," : "") << f.args[i].name;
        os << ')';
      }
      break;
    case K::Not:
      os << "¬";
      fo_print(os, f.sub[0], 5, rightmost);
      break;
    case K::Forall:
    case K::Exists:
      os << (f.kind == K::Forall ? "∀" : "∃") << f.name << ". ";
      fo_print(os, f.sub[0], 0, true);
      break;
    default: {
      const char* sym = f.kind == K::And ? " ∧ " : f.kind == K::Or ? " ∨ " : f.kind == K::Implies ? " → " : " ↔ ";
      // Implication groups to the right, the others to the left.
      int left = f.kind == K::Implies ? lv + 1 : lv;
      int right = f.kind == K::Implies ? lv : lv + 1;
      fo_print(os, f.sub[0], left, false);
      os << sym;
      fo_print(os, f.sub[1], right, rightmost);
    }
  }
  if (parens) os << ')';
}

bool lower_word(const std::string& s) {
  if (s.empty() || !(s[0] >= 'a' && s[0] <= 'z')) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  }
  return true;
}

std::string tptp_name(const std::string& s) {
  if (lower_word(s)) return s;
  std::string out = "'";
  for (char c : s) {
    if (c == '\'' || c == '\\') out += '\\';
    out += c;
  }
  return out + "'";
}

void tptp_print(std::ostream& os, const FOFormula& f) {
  using K = FOFormula::Kind;
  switch (f.kind) {
    case K::True: os << "$true"; return;
    case K::False: os << "$false"; return;
    case K::Pred:
      os << tptp_name(f.name);
      if (!f.args.empty()) {
        os << '(';
        for (std::size_t i = 0; i < f.args.size(); ++i) {
          os << (i ? "," : "") << (f.args[i].is_var ? f.args[i].name : tptp_name(f.args[i].name));
        }
        os << ')';
      }
      return;
    case K::Not:
      os << '~';
      tptp_print(os, f.sub[0]);
      return;
    case K::Forall:
    case K::Exists: {
      const char* guard = f.sort == Sort::World ? "world" : "indiv";
      os << (f.kind == K::Forall ? "![" : "?[") << f.name << "]: (" << guard << '(' << f.name << ')'
         << (f.kind == K::Forall ? " => " : " & ");
      tptp_print(os, f.sub[0]);
      os << ')';
      return;
    }
    default: {
      const char* sym = f.kind == K::And ? " & " : f.kind == K::Or ? " | " : f.kind == K::Implies ? " => " : " <=> ";
      os << '(';
      tptp_print(os, f.sub[0]);
      os << sym;
      tptp_print(os, f.sub[1]);
      os << ')';
    }
  }
}

}  // namespace

std::string to_string(const FOFormula& f) {
  std::ostringstream os;
  fo_print(os, f, 0, true);
  return os.str();
}

std::string emit_tptp(const FOFormula& f, const std::string& name, const std::string& role) {
  std::ostringstream os;
  os << "fof(" << tptp_name(name) << ", " << role << ", ";
  tptp_print(os, f);
  os << ").\n";
  return os.str();
}

std::string emit_tptp_problem(const FOFormula& conjecture, const std::string& name, Logic logic,
                              const std::vector<std::string>& individuals) {
  std::ostringstream os;
  os << "% " << name << " (" << to_string(logic) << ")\n";
  os << "fof(world_nonempty, axiom, ?[W]: world(W)).\n";
  os << "fof(indiv_nonempty, axiom, ?[X]: indiv(X)).\n";
  for (const std::string& c : individuals) {
    os << "fof(" << tptp_name("indiv_" + c) << ", axiom, indiv(" << tptp_name(c) << ")).\n";
  }
  if (logic == Logic::Sdl) {
    os << "fof(seriality, axiom, ![W]: (world(W) => ?[V]: (world(V) & " << tptp_name(kAccess) << "(W,V)))).\n";
  }
  os << emit_tptp(conjecture, name, "conjecture");
  return os.str();
}

}  // namespace deon
