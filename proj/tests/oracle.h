// Independent reference implementations used by the tests: a set-based
// evaluator written straight from the truth conditions, a brute-force model
// enumerator without symmetry pruning, and a named-variable lambda reducer.
#ifndef DEON_TESTS_ORACLE_H
#define DEON_TESTS_ORACLE_H

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "deon/formula.h"
#include "deon/lambda.h"
#include "deon/semantics.h"

namespace oracle {

using deon::Formula;
using deon::Logic;
using deon::Op;

struct OModel {
  int n = 1;
  std::vector<std::vector<bool>> R;
  std::map<std::string, std::set<int>> V;
  std::vector<std::string> domain;
};

inline OModel from(const deon::Model& m) {
  OModel o;
  o.n = m.worlds;
  o.R.assign(static_cast<std::size_t>(m.worlds), std::vector<bool>(static_cast<std::size_t>(m.worlds), false));
  for (int s = 0; s < m.worlds; ++s) {
    for (int t = 0; t < m.worlds; ++t) o.R[s][t] = (m.rel[s] >> t) & 1u;
  }
  for (std::size_t i = 0; i < m.atoms.size(); ++i) {
    std::set<int> ws;
    for (int w = 0; w < m.worlds; ++w) {
      if ((m.valuation[i] >> w) & 1u) ws.insert(w);
    }
    o.V[m.atoms[i]] = ws;
  }
  o.domain = m.domain;
  return o;
}

inline deon::Model to_model(const OModel& o) {
  deon::Model m(o.n);
  for (int s = 0; s < o.n; ++s) {
    for (int t = 0; t < o.n; ++t) {
      if (o.R[s][t]) m.relate(s, t);
    }
  }
  for (const auto& [a, ws] : o.V) {
    deon::WorldSet s = 0;
    for (int w : ws) s |= deon::WorldSet{1} << w;
    m.set_atom(a, s);
  }
  m.domain = o.domain;
  return m;
}

inline std::string key(const Formula& atom) {
  std::string s = atom.name();
  if (!atom.args().empty()) {
    s += "(";
    for (std::size_t i = 0; i < atom.args().size(); ++i) s += (i ? "," : "") + atom.args()[i].name;
    s += ")";
  }
  return s;
}

bool holds(const OModel& m, const Formula& f, int w, Logic logic);

inline std::set<int> extension(const OModel& m, const Formula& f, Logic logic) {
  std::set<int> out;
  for (int w = 0; w < m.n; ++w) {
    if (holds(m, f, w, logic)) out.insert(w);
  }
  return out;
}

// E: O(psi/phi) holds iff every best phi-world is a psi-world, where s is
// best when s is a phi-world at least as good as every phi-world.
inline bool e_oblig(const OModel& m, const Formula& psi, const Formula& phi) {
  const std::set<int> phis = extension(m, phi, Logic::E);
  for (int s : phis) {
    bool best = true;
    for (int t : phis) best = best && m.R[s][t];
    if (best && !holds(m, psi, s, Logic::E)) return false;
  }
  return true;
}

inline bool holds(const OModel& m, const Formula& f, int w, Logic logic) {
  const bool sdl = logic == Logic::Sdl;
  auto all_succ = [&](const Formula& g) {
    for (int v = 0; v < m.n; ++v) {
      if (m.R[w][v] && !holds(m, g, v, logic)) return false;
    }
    return true;
  };
  auto everywhere = [&](const Formula& g) {
    for (int v = 0; v < m.n; ++v) {
      if (!holds(m, g, v, logic)) return false;
    }
    return true;
  };
  switch (f.op()) {
    case Op::Atom: {
      if (f.name() == deon::kTopAtom) return false;
      auto it = m.V.find(key(f));
      if (it == m.V.end()) throw std::runtime_error("oracle: unknown atom " + key(f));
      return it->second.count(w) != 0;
    }
    case Op::Not: return !holds(m, f.lhs(), w, logic);
    case Op::And: return holds(m, f.lhs(), w, logic) && holds(m, f.rhs(), w, logic);
    case Op::Or: return holds(m, f.lhs(), w, logic) || holds(m, f.rhs(), w, logic);
    case Op::Implies: return !holds(m, f.lhs(), w, logic) || holds(m, f.rhs(), w, logic);
    case Op::Iff: return holds(m, f.lhs(), w, logic) == holds(m, f.rhs(), w, logic);
    case Op::Box: return sdl ? all_succ(f.lhs()) : everywhere(f.lhs());
    case Op::Dia:
      return sdl ? !all_succ(Formula::negation(f.lhs())) : !everywhere(Formula::negation(f.lhs()));
    case Op::Oblig:
      if (sdl) throw std::runtime_error("oracle: dyadic O in SDL");
      return e_oblig(m, f.lhs(), f.rhs());
    case Op::ObligM: return sdl ? all_succ(f.lhs()) : e_oblig(m, f.lhs(), Formula::top());
    case Op::Perm:
      return sdl ? !all_succ(Formula::negation(f.lhs()))
                 : !e_oblig(m, Formula::negation(f.lhs()), Formula::top());
    case Op::Forb:
      return sdl ? all_succ(Formula::negation(f.lhs())) : e_oblig(m, Formula::negation(f.lhs()), Formula::top());
    case Op::Forall:
    case Op::Exists: {
      const bool univ = f.op() == Op::Forall;
      for (const std::string& c : m.domain) {
        bool v = holds(m, deon::substitute(f.lhs(), f.name(), deon::Term::constant(c)), w, logic);
        if (univ && !v) return false;
        if (!univ && v) return true;
      }
      return univ;
    }
  }
  return false;
}

inline bool valid(const OModel& m, const Formula& f, Logic logic) {
  for (int w = 0; w < m.n; ++w) {
    if (!holds(m, f, w, logic)) return false;
  }
  return true;
}

inline bool frame_ok(const OModel& m, const deon::FrameConditions& fc) {
  for (int s = 0; s < m.n; ++s) {
    bool succ = false;
    for (int t = 0; t < m.n; ++t) succ = succ || m.R[s][t];
    if (fc.serial && !succ) return false;
    if (fc.reflexive && !m.R[s][s]) return false;
    for (int t = 0; t < m.n; ++t) {
      if (fc.total && !m.R[s][t] && !m.R[t][s]) return false;
      for (int u = 0; u < m.n; ++u) {
        if (fc.transitive && m.R[s][t] && m.R[t][u] && !m.R[s][u]) return false;
      }
    }
  }
  return true;
}

inline std::set<std::string> atoms_of(const std::vector<Formula>& fs) {
  std::set<std::string> out;
  for (const Formula& f : fs) {
    for (const Formula& g : deon::subformulas(f)) {
      if (g.is_atom() && g.name() != deon::kTopAtom) out.insert(key(g));
    }
  }
  return out;
}

// Every model with n worlds over `atoms` satisfying `fc`, in no particular
// symmetry class; stops when `visit` returns false. Returns false if stopped.
inline bool for_each_model(int n, const std::vector<std::string>& atoms, const deon::FrameConditions& fc,
                           const std::function<bool(const OModel&)>& visit) {
  const int pairs = n * n;
  const int abits = n * static_cast<int>(atoms.size());
  OModel m;
  m.n = n;
  m.R.assign(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n)));
  for (long r = 0; r < (1L << pairs); ++r) {
    for (int k = 0; k < pairs; ++k) m.R[k / n][k % n] = (r >> k) & 1;
    if (!frame_ok(m, fc)) continue;
    for (long v = 0; v < (1L << abits); ++v) {
      for (std::size_t a = 0; a < atoms.size(); ++a) {
        std::set<int> ws;
        for (int w = 0; w < n; ++w) {
          if ((v >> (static_cast<int>(a) * n + w)) & 1) ws.insert(w);
        }
        m.V[atoms[a]] = ws;
      }
      if (!visit(m)) return false;
    }
  }
  return true;
}

// Smallest n <= max_n with a model validating `fs` (and falsifying `goal`
// somewhere, if given); nullopt if none.
inline std::optional<OModel> brute_model(const std::vector<Formula>& fs, const std::optional<Formula>& goal,
                                         Logic logic, deon::FrameConditions fc, int max_n) {
  if (logic == Logic::Sdl) fc.serial = true;
  std::vector<Formula> all = fs;
  if (goal) all.push_back(*goal);
  auto as = atoms_of(all);
  std::vector<std::string> atoms(as.begin(), as.end());
  std::optional<OModel> found;
  for (int n = 1; n <= max_n && !found; ++n) {
    for_each_model(n, atoms, fc, [&](const OModel& m) {
      for (const Formula& f : fs) {
        if (!valid(m, f, logic)) return true;
      }
      if (goal && valid(m, *goal, logic)) return true;
      found = m;
      return false;
    });
  }
  return found;
}

// ---------------------------------------------------------------------------
// Named lambda terms with textbook capture-avoiding substitution.

struct NTerm {
  enum class Kind { Var, Const, Lam, App } kind = Kind::Var;
  std::string name;
  deon::SimpleType type = deon::SimpleType::o();  // binder type for Lam
  std::shared_ptr<NTerm> a, b;
};
using NPtr = std::shared_ptr<NTerm>;

inline NPtr nvar(const std::string& x) { return std::make_shared<NTerm>(NTerm{NTerm::Kind::Var, x, deon::SimpleType::o(), nullptr, nullptr}); }
inline NPtr nconst(const std::string& c) { return std::make_shared<NTerm>(NTerm{NTerm::Kind::Const, c, deon::SimpleType::o(), nullptr, nullptr}); }
inline NPtr nlam(const std::string& x, const deon::SimpleType& t, NPtr body) {
  return std::make_shared<NTerm>(NTerm{NTerm::Kind::Lam, x, t, std::move(body), nullptr});
}
inline NPtr napp(NPtr f, NPtr x) {
  return std::make_shared<NTerm>(NTerm{NTerm::Kind::App, "", deon::SimpleType::o(), std::move(f), std::move(x)});
}

inline std::set<std::string> nfree(const NPtr& t) {
  switch (t->kind) {
    case NTerm::Kind::Var: return {t->name};
    case NTerm::Kind::Const: return {};
    case NTerm::Kind::Lam: {
      auto s = nfree(t->a);
      s.erase(t->name);
      return s;
    }
    case NTerm::Kind::App: {
      auto s = nfree(t->a);
      auto r = nfree(t->b);
      s.insert(r.begin(), r.end());
      return s;
    }
  }
  return {};
}

inline std::string nfresh() {
  static int counter = 0;
  return "_n" + std::to_string(counter++);
}

inline NPtr nsubst(const NPtr& t, const std::string& x, const NPtr& s) {
  switch (t->kind) {
    case NTerm::Kind::Var: return t->name == x ? s : t;
    case NTerm::Kind::Const: return t;
    case NTerm::Kind::App: return napp(nsubst(t->a, x, s), nsubst(t->b, x, s));
    case NTerm::Kind::Lam: {
      if (t->name == x) return t;
      if (nfree(s).count(t->name)) {
        const std::string y = nfresh();
        return nlam(y, t->type, nsubst(nsubst(t->a, t->name, nvar(y)), x, s));
      }
      return nlam(t->name, t->type, nsubst(t->a, x, s));
    }
  }
  return t;
}

// Normal-order beta normalization followed by eta contraction.
inline NPtr nbeta(const NPtr& t) {
  switch (t->kind) {
    case NTerm::Kind::Var:
    case NTerm::Kind::Const: return t;
    case NTerm::Kind::Lam: return nlam(t->name, t->type, nbeta(t->a));
    case NTerm::Kind::App: {
      NPtr f = nbeta(t->a);
      if (f->kind == NTerm::Kind::Lam) return nbeta(nsubst(f->a, f->name, t->b));
      return napp(f, nbeta(t->b));
    }
  }
  return t;
}

inline NPtr neta(const NPtr& t) {
  switch (t->kind) {
    case NTerm::Kind::Var:
    case NTerm::Kind::Const: return t;
    case NTerm::Kind::App: return napp(neta(t->a), neta(t->b));
    case NTerm::Kind::Lam: {
      NPtr body = neta(t->a);
      if (body->kind == NTerm::Kind::App && body->b->kind == NTerm::Kind::Var && body->b->name == t->name &&
          !nfree(body->a).count(t->name)) {
        return body->a;
      }
      return nlam(t->name, t->type, body);
    }
  }
  return t;
}

inline NPtr from_lterm(const deon::LTerm& t, std::vector<std::string>& scope) {
  using K = deon::LTerm::Kind;
  switch (t.kind()) {
    case K::Const: return nconst(t.name());
    case K::Free: return nvar(t.name());
    case K::Bound: return nvar(scope[scope.size() - 1 - static_cast<std::size_t>(t.index())]);
    case K::App: return napp(from_lterm(t.fun(), scope), from_lterm(t.arg(), scope));
    case K::Abs: {
      const std::string x = nfresh();
      scope.push_back(x);
      NPtr body = from_lterm(t.body(), scope);
      scope.pop_back();
      return nlam(x, t.type(), body);
    }
  }
  return nullptr;
}

// De Bruijn rendering in which alpha-equivalent terms coincide.
inline std::string debruijn(const NPtr& t, std::vector<std::string>& scope) {
  switch (t->kind) {
    case NTerm::Kind::Var:
      for (std::size_t k = scope.size(); k-- > 0;) {
        if (scope[k] == t->name) return "#" + std::to_string(scope.size() - 1 - k);
      }
      return "$" + t->name;
    case NTerm::Kind::Const: return t->name;
    case NTerm::Kind::App: return "(" + debruijn(t->a, scope) + " " + debruijn(t->b, scope) + ")";
    case NTerm::Kind::Lam: {
      scope.push_back(t->name);
      std::string s = "(\\:" + t->type.str() + " " + debruijn(t->a, scope) + ")";
      scope.pop_back();
      return s;
    }
  }
  return "";
}

inline std::string debruijn(const deon::LTerm& t) {
  std::vector<std::string> scope;
  return debruijn(from_lterm(t, scope), scope);
}

inline std::string reference_normal_form(const deon::LTerm& t) {
  std::vector<std::string> scope;
  NPtr n = neta(nbeta(from_lterm(t, scope)));
  return debruijn(n, scope);
}

}  // namespace oracle

#endif  // DEON_TESTS_ORACLE_H
