#include "deon/lambda.h"

#include <atomic>
#include <functional>
#include <map>
#include <sstream>

namespace deon {

// ---------------------------------------------------------------------------
// SimpleType

SimpleType SimpleType::o() {
  static const SimpleType t(std::make_shared<const Node>(Node{Kind::O, nullptr, nullptr}));
  return t;
}
SimpleType SimpleType::i() {
  static const SimpleType t(std::make_shared<const Node>(Node{Kind::I, nullptr, nullptr}));
  return t;
}
SimpleType SimpleType::e() {
  static const SimpleType t(std::make_shared<const Node>(Node{Kind::E, nullptr, nullptr}));
  return t;
}
SimpleType SimpleType::arrow(SimpleType from, SimpleType to) {
  return SimpleType(std::make_shared<const Node>(
      Node{Kind::Arrow, std::make_shared<const SimpleType>(std::move(from)),
           std::make_shared<const SimpleType>(std::move(to))}));
}
SimpleType SimpleType::arrows(const std::vector<SimpleType>& args, SimpleType result) {
  for (auto it = args.rbegin(); it != args.rend(); ++it) result = arrow(*it, result);
  return result;
}
SimpleType SimpleType::prop() {
  static const SimpleType t = arrow(i(), o());
  return t;
}

const SimpleType& SimpleType::from() const {
  if (!is_arrow()) throw TypeError("base type has no domain");
  return *node_->from;
}
const SimpleType& SimpleType::to() const {
  if (!is_arrow()) throw TypeError("base type has no codomain");
  return *node_->to;
}

std::string SimpleType::str() const {
  switch (kind()) {
    case Kind::O: return "o";
    case Kind::I: return "i";
    case Kind::E: return "e";
    case Kind::Arrow: {
      std::string l = from().str();
      if (from().is_arrow()) l = "(" + l + ")";
      return l + "→" + to().str();
    }
  }
  return "?";
}

bool operator==(const SimpleType& a, const SimpleType& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  if (!a.is_arrow()) return true;
  return a.from() == b.from() && a.to() == b.to();
}

// ---------------------------------------------------------------------------
// LTerm construction

LTerm LTerm::constant(std::string name, SimpleType type) {
  return LTerm(std::make_shared<const Node>(
      Node{Kind::Const, std::move(name), std::move(type), 0, nullptr, nullptr, nullptr}));
}

LTerm LTerm::defined(std::string name, SimpleType type, LTerm definiens) {
  SimpleType actual = type_of(definiens);
  if (!(actual == type)) {
    throw TypeError("definiens of '" + name + "' has type " + actual.str() + ", declared " +
                    type.str());
  }
  return LTerm(std::make_shared<const Node>(Node{Kind::Const, std::move(name), std::move(type), 0,
                                                 nullptr, nullptr,
                                                 std::make_shared<const LTerm>(definiens)}));
}

LTerm LTerm::var(std::string name, SimpleType type) {
  return LTerm(std::make_shared<const Node>(
      Node{Kind::Free, std::move(name), std::move(type), 0, nullptr, nullptr, nullptr}));
}

LTerm LTerm::bound(int index) {
  return LTerm(std::make_shared<const Node>(
      Node{Kind::Bound, {}, std::nullopt, index, nullptr, nullptr, nullptr}));
}

LTerm LTerm::abstraction(std::string hint, SimpleType type, LTerm closed_body) {
  return LTerm(std::make_shared<const Node>(
      Node{Kind::Abs, std::move(hint), std::move(type), 0,
           std::make_shared<const LTerm>(std::move(closed_body)), nullptr, nullptr}));
}

LTerm LTerm::lam(const std::string& name, const SimpleType& type, const LTerm& body) {
  return abstraction(name, type, close(body, name));
}

LTerm LTerm::app(LTerm fun, LTerm arg) {
  return LTerm(std::make_shared<const Node>(Node{Kind::App, {}, std::nullopt, 0,
                                                 std::make_shared<const LTerm>(std::move(fun)),
                                                 std::make_shared<const LTerm>(std::move(arg)),
                                                 nullptr}));
}

LTerm LTerm::app(LTerm fun, const std::vector<LTerm>& args) {
  for (const LTerm& a : args) fun = app(fun, a);
  return fun;
}

const SimpleType& LTerm::type() const {
  if (!node_->type) throw TypeError("term has no annotated type");
  return *node_->type;
}
const LTerm& LTerm::body() const {
  if (!is(Kind::Abs)) throw std::logic_error("not an abstraction");
  return *node_->a;
}
const LTerm& LTerm::fun() const {
  if (!is(Kind::App)) throw std::logic_error("not an application");
  return *node_->a;
}
const LTerm& LTerm::arg() const {
  if (!is(Kind::App)) throw std::logic_error("not an application");
  return *node_->b;
}
const LTerm& LTerm::definiens() const {
  if (!node_->def) throw std::logic_error("'" + name() + "' has no definiens");
  return *node_->def;
}

std::size_t LTerm::size() const {
  switch (kind()) {
    case Kind::Abs: return 1 + body().size();
    case Kind::App: return 1 + fun().size() + arg().size();
    default: return 1;
  }
}

namespace {

LTerm replace_bound(const LTerm& t, int depth, const LTerm& with) {
  switch (t.kind()) {
    case LTerm::Kind::Bound:
      return t.index() == depth ? with : t;
    case LTerm::Kind::Abs:
      return LTerm::abstraction(t.name(), t.type(), replace_bound(t.body(), depth + 1, with));
    case LTerm::Kind::App:
      return LTerm::app(replace_bound(t.fun(), depth, with), replace_bound(t.arg(), depth, with));
    default:
      return t;
  }
}

LTerm close_rec(const LTerm& t, const std::string& name, int depth) {
  switch (t.kind()) {
    case LTerm::Kind::Free:
      return t.name() == name ? LTerm::bound(depth) : t;
    case LTerm::Kind::Abs:
      return LTerm::abstraction(t.name(), t.type(), close_rec(t.body(), name, depth + 1));
    case LTerm::Kind::App:
      return LTerm::app(close_rec(t.fun(), name, depth), close_rec(t.arg(), name, depth));
    default:
      return t;
  }
}

std::atomic<unsigned long> fresh_counter{0};

// Internal names never produced by the API: '%' is not an identifier character.
std::string fresh_name() { return "%" + std::to_string(fresh_counter.fetch_add(1)); }

}  // namespace

LTerm LTerm::open(const LTerm& body, const LTerm& with) { return replace_bound(body, 0, with); }

LTerm LTerm::close(const LTerm& t, const std::string& name) { return close_rec(t, name, 0); }

bool operator==(const LTerm& a, const LTerm& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case LTerm::Kind::Const:
    case LTerm::Kind::Free:
      return a.name() == b.name() && a.type() == b.type();
    case LTerm::Kind::Bound:
      return a.index() == b.index();
    case LTerm::Kind::Abs:
      return a.type() == b.type() && a.body() == b.body();
    case LTerm::Kind::App:
      return a.fun() == b.fun() && a.arg() == b.arg();
  }
  return false;
}

bool alpha_eq(const LTerm& a, const LTerm& b) { return a == b; }

// ---------------------------------------------------------------------------
// Typing

namespace {

SimpleType type_rec(const LTerm& t, std::vector<SimpleType>& ctx) {
  switch (t.kind()) {
    case LTerm::Kind::Const:
    case LTerm::Kind::Free:
      return t.type();
    case LTerm::Kind::Bound: {
      int k = t.index();
      if (k < 0 || k >= static_cast<int>(ctx.size())) {
        throw TypeError("loose bound variable #" + std::to_string(k));
      }
      return ctx[ctx.size() - 1 - static_cast<std::size_t>(k)];
    }
    case LTerm::Kind::Abs: {
      ctx.push_back(t.type());
      SimpleType body = type_rec(t.body(), ctx);
      ctx.pop_back();
      return SimpleType::arrow(t.type(), body);
    }
    case LTerm::Kind::App: {
      SimpleType f = type_rec(t.fun(), ctx);
      SimpleType a = type_rec(t.arg(), ctx);
      if (!f.is_arrow()) {
        throw TypeError("cannot apply a term of base type " + f.str() + " to an argument of type " +
                        a.str());
      }
      if (!(f.from() == a)) {
        throw TypeError("ill-typed application: expected argument of type " + f.from().str() +
                        ", got " + a.str());
      }
      return f.to();
    }
  }
  throw TypeError("unknown term kind");
}

}  // namespace

SimpleType type_of(const LTerm& t) {
  std::vector<SimpleType> ctx;
  return type_rec(t, ctx);
}

std::set<std::string> free_vars(const LTerm& t) {
  std::set<std::string> out;
  std::vector<const LTerm*> stack{&t};
  while (!stack.empty()) {
    const LTerm* u = stack.back();
    stack.pop_back();
    switch (u->kind()) {
      case LTerm::Kind::Free: out.insert(u->name()); break;
      case LTerm::Kind::Abs: stack.push_back(&u->body()); break;
      case LTerm::Kind::App:
        stack.push_back(&u->fun());
        stack.push_back(&u->arg());
        break;
      default: break;
    }
  }
  return out;
}

LTerm substitute(const LTerm& t, const std::string& x, const SimpleType& x_type, const LTerm& s) {
  SimpleType st = type_of(s);
  if (!(st == x_type)) {
    throw TypeError("substitution type mismatch: variable " + x + " has type " + x_type.str() +
                    ", replacement has type " + st.str());
  }
  // Bound variables are indices, so s cannot be captured by a binder of t.
  std::function<LTerm(const LTerm&)> rec = [&](const LTerm& u) -> LTerm {
    switch (u.kind()) {
      case LTerm::Kind::Free:
        return (u.name() == x && u.type() == x_type) ? s : u;
      case LTerm::Kind::Abs:
        return LTerm::abstraction(u.name(), u.type(), rec(u.body()));
      case LTerm::Kind::App:
        return LTerm::app(rec(u.fun()), rec(u.arg()));
      default:
        return u;
    }
  };
  return rec(t);
}

// ---------------------------------------------------------------------------
// Reduction

namespace {

// Applies `step` under a binder by opening it with a fresh free variable.
template <typename Step>
std::optional<LTerm> under_binder(const LTerm& abs, Step&& step) {
  std::string v = fresh_name();
  LTerm opened = LTerm::open(abs.body(), LTerm::var(v, abs.type()));
  if (auto r = step(opened)) {
    return LTerm::abstraction(abs.name(), abs.type(), LTerm::close(*r, v));
  }
  return std::nullopt;
}

std::optional<LTerm> step_lo(const LTerm& t) {
  switch (t.kind()) {
    case LTerm::Kind::App: {
      if (t.fun().is(LTerm::Kind::Abs)) return LTerm::open(t.fun().body(), t.arg());
      if (auto f = step_lo(t.fun())) return LTerm::app(*f, t.arg());
      if (auto a = step_lo(t.arg())) return LTerm::app(t.fun(), *a);
      return std::nullopt;
    }
    case LTerm::Kind::Abs:
      return under_binder(t, step_lo);
    default:
      return std::nullopt;
  }
}

std::optional<LTerm> step_ri(const LTerm& t) {
  switch (t.kind()) {
    case LTerm::Kind::App: {
      if (auto a = step_ri(t.arg())) return LTerm::app(t.fun(), *a);
      if (auto f = step_ri(t.fun())) return LTerm::app(*f, t.arg());
      if (t.fun().is(LTerm::Kind::Abs)) return LTerm::open(t.fun().body(), t.arg());
      return std::nullopt;
    }
    case LTerm::Kind::Abs:
      return under_binder(t, step_ri);
    default:
      return std::nullopt;
  }
}

// Rightmost-innermost over beta redexes and defined constants.
std::optional<LTerm> step_conversion(const LTerm& t) {
  switch (t.kind()) {
    case LTerm::Kind::Const:
      if (t.is_defined()) return t.definiens();
      return std::nullopt;
    case LTerm::Kind::App: {
      if (auto a = step_conversion(t.arg())) return LTerm::app(t.fun(), *a);
      if (auto f = step_conversion(t.fun())) return LTerm::app(*f, t.arg());
      if (t.fun().is(LTerm::Kind::Abs)) return LTerm::open(t.fun().body(), t.arg());
      return std::nullopt;
    }
    case LTerm::Kind::Abs:
      return under_binder(t, step_conversion);
    default:
      return std::nullopt;
  }
}

}  // namespace

std::optional<LTerm> beta_step(const LTerm& t, Strategy s) {
  return s == Strategy::LeftmostOutermost ? step_lo(t) : step_ri(t);
}

LTerm unfold(const LTerm& t) {
  switch (t.kind()) {
    case LTerm::Kind::Const:
      return t.is_defined() ? unfold(t.definiens()) : t;
    case LTerm::Kind::Abs:
      return LTerm::abstraction(t.name(), t.type(), unfold(t.body()));
    case LTerm::Kind::App:
      return LTerm::app(unfold(t.fun()), unfold(t.arg()));
    default:
      return t;
  }
}

LTerm eta_normalize(const LTerm& t) {
  switch (t.kind()) {
    case LTerm::Kind::App:
      return LTerm::app(eta_normalize(t.fun()), eta_normalize(t.arg()));
    case LTerm::Kind::Abs: {
      std::string v = fresh_name();
      LTerm body = eta_normalize(LTerm::open(t.body(), LTerm::var(v, t.type())));
      if (body.is(LTerm::Kind::App) && body.arg().is(LTerm::Kind::Free) && body.arg().name() == v &&
          free_vars(body.fun()).count(v) == 0) {
        return body.fun();
      }
      return LTerm::abstraction(t.name(), t.type(), LTerm::close(body, v));
    }
    default:
      return t;
  }
}

LTerm canonical_names(const LTerm& t) {
  struct Counters {
    int worlds = 0;
    int individuals = 0;
    int other = 0;
  };
  std::function<LTerm(const LTerm&, Counters)> rec = [&](const LTerm& u, Counters c) -> LTerm {
    switch (u.kind()) {
      case LTerm::Kind::Abs: {
        std::string hint;
        switch (u.type().kind()) {
          case SimpleType::Kind::I: hint = "w" + std::to_string(c.worlds++); break;
          case SimpleType::Kind::E: hint = "x" + std::to_string(c.individuals++); break;
          default: hint = "f" + std::to_string(c.other++); break;
        }
        return LTerm::abstraction(hint, u.type(), rec(u.body(), c));
      }
      case LTerm::Kind::App:
        return LTerm::app(rec(u.fun(), c), rec(u.arg(), c));
      default:
        return u;
    }
  };
  return rec(t, Counters{});
}

LTerm normalize(const LTerm& t, Strategy s) {
  LTerm u = unfold(t);
  while (auto next = beta_step(u, s)) u = std::move(*next);
  return canonical_names(eta_normalize(u));
}

bool is_beta_normal(const LTerm& t) {
  switch (t.kind()) {
    case LTerm::Kind::App:
      return !t.fun().is(LTerm::Kind::Abs) && is_beta_normal(t.fun()) && is_beta_normal(t.arg());
    case LTerm::Kind::Abs:
      return is_beta_normal(t.body());
    default:
      return true;
  }
}

std::vector<LTerm> conversion_steps(const LTerm& t) {
  constexpr std::size_t kMaxSteps = 100000;
  std::vector<LTerm> out{t};
  while (out.size() < kMaxSteps) {
    auto next = step_conversion(out.back());
    if (!next) break;
    out.push_back(std::move(*next));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

enum Level { kBinder = 0, kIffL = 1, kImpL = 2, kOrL = 3, kAndL = 4, kNotL = 5, kAppL = 6, kAtomL = 7 };

struct Printer {
  const PrintOptions& opts;
  std::set<std::string> avoid;  // free variable names of the whole term
  std::vector<std::string> names;  // display names of enclosing binders, innermost last

  static std::pair<LTerm, std::vector<LTerm>> spine(const LTerm& t) {
    std::vector<LTerm> args;
    LTerm h = t;
    while (h.is(LTerm::Kind::App)) {
      args.push_back(h.arg());
      h = h.fun();
    }
    return {h, std::vector<LTerm>(args.rbegin(), args.rend())};
  }

  static int infix_level(const std::string& n) {
    if (n == hol::kAnd) return kAndL;
    if (n == hol::kOr) return kOrL;
    if (n == hol::kImp) return kImpL;
    if (n == hol::kIff) return kIffL;
    return -1;
  }

  static bool is_primitive(const LTerm& h, const char* name) {
    return h.is(LTerm::Kind::Const) && !h.is_defined() && h.name() == name;
  }

  std::string pick_name(const std::string& hint) const {
    std::string n = hint.empty() || hint[0] == '%' ? "v" : hint;
    auto taken = [&](const std::string& s) {
      if (avoid.count(s)) return true;
      for (const std::string& m : names) {
        if (m == s) return true;
      }
      return false;
    };
    while (taken(n)) n += "'";
    return n;
  }

  int level(const LTerm& t) const {
    if (t.is(LTerm::Kind::Abs)) return kBinder;
    if (!t.is(LTerm::Kind::App)) return kAtomL;
    auto [h, args] = spine(t);
    if (h.is(LTerm::Kind::Const)) {
      int il = infix_level(h.name());
      if (il >= 0 && args.size() == 2) return il;
      if (is_primitive(h, hol::kNot) && args.size() == 1) {
        return folded_exists(args[0]) ? kBinder : kNotL;
      }
      if (args.size() == 1 && args[0].is(LTerm::Kind::Abs) &&
          ((opts.fold_quantifiers && is_primitive(h, hol::kPi)) || (h.is_defined() && h.name() == hol::kSigma))) {
        return kBinder;
      }
    }
    return kAppL;
  }

  // ~Pi(\x. ~b)
  bool folded_exists(const LTerm& arg) const {
    if (!opts.fold_quantifiers) return false;
    auto [h, args] = spine(arg);
    if (!is_primitive(h, hol::kPi) || args.size() != 1 || !args[0].is(LTerm::Kind::Abs)) return false;
    auto [h2, args2] = spine(args[0].body());
    return is_primitive(h2, hol::kNot) && args2.size() == 1;
  }

  void binder(std::ostream& os, const std::string& sym, const LTerm& abs, bool body_negated) {
    std::string n = pick_name(abs.name());
    os << sym << n;
    if (opts.show_types) os << ":" << abs.type().str();
    os << ". ";
    names.push_back(n);
    LTerm body = abs.body();
    if (body_negated) body = spine(body).second[0];
    print(os, body, kBinder, true);
    names.pop_back();
  }

  void print(std::ostream& os, const LTerm& t, int min_level, bool rightmost) {
    int lv = level(t);
    bool parens = lv < min_level && !(lv == kBinder && rightmost && min_level <= kNotL);
    if (parens) os << '(';
    emit(os, t, parens || rightmost);
    if (parens) os << ')';
  }

  void emit(std::ostream& os, const LTerm& t, bool rightmost) {
    switch (t.kind()) {
      case LTerm::Kind::Const:
        os << t.name();
        if (opts.show_types && !hol::is_logical_constant(t)) os << ":" << t.type().str();
        return;
      case LTerm::Kind::Free:
        os << t.name();
        if (opts.show_types) os << ":" << t.type().str();
        return;
      case LTerm::Kind::Bound: {
        int k = t.index();
        if (k < static_cast<int>(names.size())) {
          os << names[names.size() - 1 - static_cast<std::size_t>(k)];
        } else {
          os << "#" << k;
        }
        return;
      }
      case LTerm::Kind::Abs:
        binder(os, "λ", t, false);
        return;
      case LTerm::Kind::App:
        break;
    }
    auto [h, args] = spine(t);
    if (h.is(LTerm::Kind::Const)) {
      int il = infix_level(h.name());
      if (il >= 0 && args.size() == 2) {
        print(os, args[0], il + 1, false);
        os << ' ' << h.name() << ' ';
        print(os, args[1], il + 1, rightmost);
        return;
      }
      if (is_primitive(h, hol::kNot) && args.size() == 1) {
        if (folded_exists(args[0])) {
          binder(os, "∃", spine(args[0]).second[0], true);
          return;
        }
        os << h.name();
        print(os, args[0], kNotL, rightmost);
        return;
      }
      if (args.size() == 1 && args[0].is(LTerm::Kind::Abs)) {
        if (opts.fold_quantifiers && is_primitive(h, hol::kPi)) {
          binder(os, "∀", args[0], false);
          return;
        }
        if (h.is_defined() && h.name() == hol::kSigma) {
          binder(os, "∃", args[0], false);
          return;
        }
      }
    }
    print(os, h, kAppL, false);
    bool tight = is_primitive(h, hol::kPi) || is_primitive(h, hol::kNot);
    for (const LTerm& a : args) {
      if (!tight || level(a) >= kAtomL) os << ' ';
      print(os, a, kAtomL, false);
    }
  }
};

}  // namespace

std::string to_string(const LTerm& t, const PrintOptions& opts) {
  Printer p{opts, free_vars(t), {}};
  std::ostringstream os;
  p.print(os, t, kBinder, true);
  return os.str();
}

// ---------------------------------------------------------------------------
// Logical vocabulary

namespace hol {

namespace {
SimpleType o_to_o() { return SimpleType::arrow(SimpleType::o(), SimpleType::o()); }
SimpleType o_to_o_to_o() { return SimpleType::arrow(SimpleType::o(), o_to_o()); }
}  // namespace

LTerm neg() { return LTerm::constant(kNot, o_to_o()); }
LTerm disj() { return LTerm::constant(kOr, o_to_o_to_o()); }
LTerm conj() { return LTerm::constant(kAnd, o_to_o_to_o()); }
LTerm imp() { return LTerm::constant(kImp, o_to_o_to_o()); }
LTerm iff() { return LTerm::constant(kIff, o_to_o_to_o()); }

LTerm pi(const SimpleType& domain) {
  return LTerm::constant(kPi, SimpleType::arrow(SimpleType::arrow(domain, SimpleType::o()),
                                                SimpleType::o()));
}

LTerm sigma(const SimpleType& domain) {
  SimpleType pred = SimpleType::arrow(domain, SimpleType::o());
  const std::string hint = domain.kind() == SimpleType::Kind::I ? "v" : "x";
  LTerm phi = LTerm::var("Φ", pred);
  LTerm x = LTerm::var(hint, domain);
  LTerm def = LTerm::lam("Φ", pred, neg(LTerm::app(pi(domain), LTerm::lam(hint, domain, neg(LTerm::app(phi, x))))));
  return LTerm::defined(kSigma, SimpleType::arrow(pred, SimpleType::o()), def);
}

LTerm neg(const LTerm& a) { return LTerm::app(neg(), a); }
LTerm disj(const LTerm& a, const LTerm& b) { return LTerm::app(disj(), {a, b}); }
LTerm conj(const LTerm& a, const LTerm& b) { return LTerm::app(conj(), {a, b}); }
LTerm imp(const LTerm& a, const LTerm& b) { return LTerm::app(imp(), {a, b}); }
LTerm iff(const LTerm& a, const LTerm& b) { return LTerm::app(iff(), {a, b}); }

LTerm forall(const std::string& name, const SimpleType& type, const LTerm& body) {
  return LTerm::app(pi(type), LTerm::lam(name, type, body));
}

LTerm exists(const std::string& name, const SimpleType& type, const LTerm& body) {
  return LTerm::app(sigma(type), LTerm::lam(name, type, body));
}

bool is_logical_constant(const LTerm& t) {
  if (!t.is(LTerm::Kind::Const)) return false;
  static const std::set<std::string> names = {kNot, kOr, kAnd, kImp, kIff, kPi, kSigma};
  return names.count(t.name()) != 0;
}

}  // namespace hol

}  // namespace deon
