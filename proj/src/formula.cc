#include "deon/formula.h"

#include <algorithm>
#include <cctype>
#include <functional>
#include <optional>
#include <sstream>

namespace deon {

std::string_view to_string(Logic logic) { return logic == Logic::Sdl ? "sdl" : "e"; }

Logic logic_from_string(std::string_view s) {
  if (s == "sdl") return Logic::Sdl;
  if (s == "e" || s == "E") return Logic::E;
  throw std::invalid_argument("unknown logic '" + std::string(s) + "' (expected sdl or e)");
}

ParseMode parse_mode(Logic logic) { return logic == Logic::Sdl ? ParseMode::Sdl : ParseMode::E; }

// ---------------------------------------------------------------------------
// Signature

namespace {

const std::set<std::string, std::less<>>& keywords() {
  static const std::set<std::string, std::less<>> kw = {"box",    "dia",  "forall",
                                                        "exists", "true", "false"};
  return kw;
}

}  // namespace

bool Signature::valid_name(std::string_view name) {
  if (name.empty() || !std::isalpha(static_cast<unsigned char>(name[0]))) return false;
  for (char c : name) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  return keywords().count(name) == 0;
}

void Signature::add_predicate(const std::string& name, int arity) {
  if (!valid_name(name)) throw std::invalid_argument("invalid predicate name '" + name + "'");
  if (arity < 0) throw std::invalid_argument("negative arity for '" + name + "'");
  if (constants_.count(name)) {
    throw std::invalid_argument("'" + name + "' is already declared as a constant");
  }
  auto [it, inserted] = predicates_.emplace(name, arity);
  if (!inserted && it->second != arity) {
    throw std::invalid_argument("predicate '" + name + "' redeclared with a different arity");
  }
}

void Signature::add_constant(const std::string& name) {
  if (!valid_name(name)) throw std::invalid_argument("invalid constant name '" + name + "'");
  if (predicates_.count(name)) {
    throw std::invalid_argument("'" + name + "' is already declared as a predicate");
  }
  constants_.insert(name);
}

int Signature::arity(const std::string& name) const {
  auto it = predicates_.find(name);
  if (it == predicates_.end()) throw std::out_of_range("unknown predicate '" + name + "'");
  return it->second;
}

// ---------------------------------------------------------------------------
// Formula nodes

struct Formula::Node {
  Op op;
  std::string name;
  std::vector<Term> args;
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;
};

namespace {

std::shared_ptr<const Formula::Node> make_node(Op op, std::string name, std::vector<Term> args,
                                               std::shared_ptr<const Formula::Node> a,
                                               std::shared_ptr<const Formula::Node> b) {
  return std::make_shared<const Formula::Node>(
      Formula::Node{op, std::move(name), std::move(args), std::move(a), std::move(b)});
}

}  // namespace

Formula::Formula() {
  static const auto top_atom = make_node(Op::Atom, std::string(kTopAtom), {}, nullptr, nullptr);
  n_ = top_atom;
}

Formula Formula::atom(std::string pred, std::vector<Term> args) {
  return Formula(make_node(Op::Atom, std::move(pred), std::move(args), nullptr, nullptr));
}
Formula Formula::negation(Formula f) { return Formula(make_node(Op::Not, {}, {}, f.n_, nullptr)); }
Formula Formula::conj(Formula a, Formula b) { return Formula(make_node(Op::And, {}, {}, a.n_, b.n_)); }
Formula Formula::disj(Formula a, Formula b) { return Formula(make_node(Op::Or, {}, {}, a.n_, b.n_)); }
Formula Formula::implies(Formula a, Formula b) {
  return Formula(make_node(Op::Implies, {}, {}, a.n_, b.n_));
}
Formula Formula::iff(Formula a, Formula b) { return Formula(make_node(Op::Iff, {}, {}, a.n_, b.n_)); }
Formula Formula::box(Formula f) { return Formula(make_node(Op::Box, {}, {}, f.n_, nullptr)); }
Formula Formula::dia(Formula f) { return Formula(make_node(Op::Dia, {}, {}, f.n_, nullptr)); }
Formula Formula::oblig(Formula body, Formula condition) {
  return Formula(make_node(Op::Oblig, {}, {}, body.n_, condition.n_));
}
Formula Formula::oblig_m(Formula f) { return Formula(make_node(Op::ObligM, {}, {}, f.n_, nullptr)); }
Formula Formula::perm(Formula f) { return Formula(make_node(Op::Perm, {}, {}, f.n_, nullptr)); }
Formula Formula::forb(Formula f) { return Formula(make_node(Op::Forb, {}, {}, f.n_, nullptr)); }
Formula Formula::forall(std::string var, Formula f) {
  return Formula(make_node(Op::Forall, std::move(var), {}, f.n_, nullptr));
}
Formula Formula::exists(std::string var, Formula f) {
  return Formula(make_node(Op::Exists, std::move(var), {}, f.n_, nullptr));
}

Formula Formula::top() {
  static const Formula t = disj(Formula(), negation(Formula()));
  return t;
}
Formula Formula::bottom() {
  static const Formula b = negation(top());
  return b;
}

Op Formula::op() const { return n_->op; }
const std::string& Formula::name() const { return n_->name; }
const std::vector<Term>& Formula::args() const { return n_->args; }

Formula Formula::lhs() const {
  if (!n_->a) throw std::logic_error("formula has no first operand");
  return Formula(n_->a);
}
Formula Formula::rhs() const {
  if (!n_->b) throw std::logic_error("formula has no second operand");
  return Formula(n_->b);
}

bool Formula::is_top() const { return *this == top(); }
bool Formula::is_bottom() const { return *this == bottom(); }

bool Formula::is_binary() const {
  switch (op()) {
    case Op::And:
    case Op::Or:
    case Op::Implies:
    case Op::Iff:
    case Op::Oblig:
      return true;
    default:
      return false;
  }
}

bool Formula::is_modal() const {
  switch (op()) {
    case Op::Box:
    case Op::Dia:
    case Op::Oblig:
    case Op::ObligM:
    case Op::Perm:
    case Op::Forb:
      return true;
    default:
      return false;
  }
}

namespace {

std::strong_ordering compare_nodes(const Formula::Node* x, const Formula::Node* y) {
  if (x == y) return std::strong_ordering::equal;
  if (!x) return std::strong_ordering::less;
  if (!y) return std::strong_ordering::greater;
  if (auto c = x->op <=> y->op; c != 0) return c;
  if (auto c = x->name <=> y->name; c != 0) return c;
  if (auto c = x->args <=> y->args; c != 0) return c;
  if (auto c = compare_nodes(x->a.get(), y->a.get()); c != 0) return c;
  return compare_nodes(x->b.get(), y->b.get());
}

}  // namespace

bool operator==(const Formula& a, const Formula& b) {
  return compare_nodes(a.n_.get(), b.n_.get()) == 0;
}

std::strong_ordering operator<=>(const Formula& a, const Formula& b) {
  return compare_nodes(a.n_.get(), b.n_.get());
}

ParseError::ParseError(const std::string& msg, int line, int column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
      line_(line),
      column_(column) {}

// ---------------------------------------------------------------------------
// Lexer and parser

namespace {

enum class Tok {
  Ident,
  Not,
  And,
  Bar,
  Arrow,
  DArrow,
  LParen,
  RParen,
  Comma,
  Dot,
  ObligOpen,  // "O{"
  RBrace,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
  bool paren_adjacent = false;  // identifier immediately followed by '('
};

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token t{Tok::End, {}, line, col};
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) {
        ++j;
      }
      t.text = std::string(src.substr(i, j - i));
      if (t.text == "O" && j < src.size() && src[j] == '{') {
        t.kind = Tok::ObligOpen;
        advance(j - i + 1);
        out.push_back(t);
        continue;
      }
      t.kind = Tok::Ident;
      t.paren_adjacent = j < src.size() && src[j] == '(';
      advance(j - i);
      out.push_back(t);
      continue;
    }
    auto starts = [&](std::string_view s) { return src.substr(i, s.size()) == s; };
    if (starts("<->")) {
      t.kind = Tok::DArrow;
      advance(3);
    } else if (starts("->")) {
      t.kind = Tok::Arrow;
      advance(2);
    } else {
      switch (c) {
        case '~': t.kind = Tok::Not; break;
        case '&': t.kind = Tok::And; break;
        case '|': t.kind = Tok::Bar; break;
        case '(': t.kind = Tok::LParen; break;
        case ')': t.kind = Tok::RParen; break;
        case ',': t.kind = Tok::Comma; break;
        case '.': t.kind = Tok::Dot; break;
        case '}': t.kind = Tok::RBrace; break;
        default:
          throw ParseError(std::string("unexpected character '") + c + "'", line, col);
      }
      advance(1);
    }
    out.push_back(t);
  }
  out.push_back(Token{Tok::End, {}, line, col});
  return out;
}

const char* describe(Tok k) {
  switch (k) {
    case Tok::Ident: return "identifier";
    case Tok::Not: return "'~'";
    case Tok::And: return "'&'";
    case Tok::Bar: return "'|'";
    case Tok::Arrow: return "'->'";
    case Tok::DArrow: return "'<->'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Comma: return "','";
    case Tok::Dot: return "'.'";
    case Tok::ObligOpen: return "'O{'";
    case Tok::RBrace: return "'}'";
    case Tok::End: return "end of input";
  }
  return "?";
}

class Parser {
 public:
  Parser(std::vector<Token> toks, Signature& sig, const ParseOptions& opts)
      : toks_(std::move(toks)), sig_(sig), opts_(opts), bound_(opts.bound) {}

  Formula parse_all() {
    Formula f = formula(false);
    if (peek().kind != Tok::End) fail("unexpected " + std::string(describe(peek().kind)));
    return f;
  }

 private:
  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  Token take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, peek().line, peek().column);
  }
  void expect(Tok k) {
    if (peek().kind != k) {
      fail(std::string("expected ") + describe(k) + ", found " + describe(peek().kind));
    }
    take();
  }

  Formula formula(bool no_bar) { return iff(no_bar); }

  Formula iff(bool no_bar) {
    Formula f = imp(no_bar);
    while (peek().kind == Tok::DArrow) {
      take();
      f = Formula::iff(f, imp(no_bar));
    }
    return f;
  }

  Formula imp(bool no_bar) {
    Formula f = disj(no_bar);
    if (peek().kind == Tok::Arrow) {
      take();
      return Formula::implies(f, imp(no_bar));
    }
    return f;
  }

  Formula disj(bool no_bar) {
    Formula f = conj(no_bar);
    while (!no_bar && peek().kind == Tok::Bar) {
      take();
      f = Formula::disj(f, conj(no_bar));
    }
    return f;
  }

  Formula conj(bool no_bar) {
    Formula f = unary(no_bar);
    while (peek().kind == Tok::And) {
      take();
      f = Formula::conj(f, unary(no_bar));
    }
    return f;
  }

  static bool starts_unary(const Token& t) {
    return t.kind == Tok::Ident || t.kind == Tok::LParen || t.kind == Tok::Not ||
           t.kind == Tok::ObligOpen;
  }

  Formula unary(bool no_bar) {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Not:
        take();
        return Formula::negation(unary(no_bar));
      case Tok::LParen: {
        take();
        Formula f = formula(false);
        expect(Tok::RParen);
        return f;
      }
      case Tok::ObligOpen: {
        if (opts_.mode == ParseMode::Sdl) fail("dyadic obligation O{..|..} is not part of SDL");
        take();
        Formula body = formula(true);
        expect(Tok::Bar);
        Formula cond = formula(false);
        expect(Tok::RBrace);
        return Formula::oblig(body, cond);
      }
      case Tok::Ident:
        break;
      default:
        fail("expected a formula, found " + std::string(describe(t.kind)));
    }
    const std::string& w = t.text;
    if (w == "true") {
      take();
      return Formula::top();
    }
    if (w == "false") {
      take();
      return Formula::bottom();
    }
    if (w == "box") {
      take();
      return Formula::box(unary(no_bar));
    }
    if (w == "dia") {
      take();
      return Formula::dia(unary(no_bar));
    }
    if (w == "forall" || w == "exists") {
      take();
      if (peek().kind != Tok::Ident || !Signature::valid_name(peek().text)) {
        fail("expected a variable name after '" + w + "'");
      }
      std::string var = take().text;
      expect(Tok::Dot);
      bound_.push_back(var);
      Formula body = formula(no_bar);
      bound_.pop_back();
      return w == "forall" ? Formula::forall(var, body) : Formula::exists(var, body);
    }
    if ((w == "O" || w == "P" || w == "F") && !t.paren_adjacent && starts_unary(peek(1))) {
      take();
      Formula f = unary(no_bar);
      if (w == "P") return Formula::perm(f);
      if (w == "F") return Formula::forb(f);
      if (opts_.mode == ParseMode::E) return Formula::oblig(f, Formula::top());
      return Formula::oblig_m(f);
    }
    return atom();
  }

  Formula atom() {
    Token t = take();
    std::vector<Term> args;
    if (peek().kind == Tok::LParen) {
      take();
      while (true) {
        if (peek().kind != Tok::Ident || !Signature::valid_name(peek().text)) {
          fail("expected a term");
        }
        Token a = take();
        if (std::find(bound_.begin(), bound_.end(), a.text) != bound_.end()) {
          args.push_back(Term::variable(a.text));
        } else {
          if (!sig_.has_constant(a.text)) {
            if (!opts_.open_signature || sig_.has_predicate(a.text)) {
              throw ParseError("unknown constant '" + a.text + "'", a.line, a.column);
            }
            sig_.add_constant(a.text);
          }
          args.push_back(Term::constant(a.text));
        }
        if (peek().kind == Tok::Comma) {
          take();
          continue;
        }
        expect(Tok::RParen);
        break;
      }
    }
    if (!Signature::valid_name(t.text)) throw ParseError("invalid predicate name", t.line, t.column);
    if (!sig_.has_predicate(t.text)) {
      if (!opts_.open_signature || sig_.has_constant(t.text)) {
        throw ParseError("unknown predicate '" + t.text + "'", t.line, t.column);
      }
      sig_.add_predicate(t.text, static_cast<int>(args.size()));
    }
    int ar = sig_.arity(t.text);
    if (ar != static_cast<int>(args.size())) {
      throw ParseError("predicate '" + t.text + "' expects " + std::to_string(ar) +
                           " argument(s), got " + std::to_string(args.size()),
                       t.line, t.column);
    }
    return Formula::atom(t.text, std::move(args));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Signature& sig_;
  const ParseOptions& opts_;
  std::vector<std::string> bound_;
};

}  // namespace

Formula parse(std::string_view text, const Signature& sig, const ParseOptions& opts) {
  Signature copy = sig;
  Parser p(lex(text), copy, opts);
  return p.parse_all();
}

Formula parse_open(std::string_view text, Signature& sig, ParseMode mode) {
  ParseOptions opts;
  opts.mode = mode;
  opts.open_signature = true;
  Parser p(lex(text), sig, opts);
  return p.parse_all();
}

// ---------------------------------------------------------------------------
// Printer

namespace {

int level(const Formula& f) {
  if (f.is_top() || f.is_bottom()) return 6;
  switch (f.op()) {
    case Op::Iff: return 1;
    case Op::Implies: return 2;
    case Op::Or: return 3;
    case Op::And: return 4;
    case Op::Atom: return 6;
    default: return 5;
  }
}

void print_rec(const Formula& f, std::ostream& os, int min_level, bool rightmost, bool no_bar) {
  bool parens = level(f) < min_level || (f.is_quantifier() && !rightmost) ||
                (no_bar && f.op() == Op::Or && !f.is_top());
  if (parens) {
    os << '(';
    rightmost = true;
    no_bar = false;
  }
  auto binary = [&](const char* sym, int left_min, int right_min) {
    print_rec(f.lhs(), os, left_min, false, no_bar);
    os << ' ' << sym << ' ';
    print_rec(f.rhs(), os, right_min, rightmost, no_bar);
  };
  auto prefix = [&](const char* kw) {
    os << kw << ' ';
    print_rec(f.lhs(), os, 5, rightmost, no_bar);
  };
  if (f.is_top()) {
    os << "true";
  } else if (f.is_bottom()) {
    os << "false";
  } else {
    switch (f.op()) {
      case Op::Atom:
        os << f.name();
        if (!f.args().empty()) {
          os << '(';
          for (std::size_t i = 0; i < f.args().size(); ++i) {
            if (i) os << ", ";
            os << f.args()[i].name;
          }
          os << ')';
        }
        break;
      case Op::Not:
        os << '~';
        print_rec(f.lhs(), os, 5, rightmost, no_bar);
        break;
      case Op::And: binary("&", 4, 5); break;
      case Op::Or: binary("|", 3, 4); break;
      case Op::Implies: binary("->", 3, 2); break;
      case Op::Iff: binary("<->", 1, 2); break;
      case Op::Box: prefix("box"); break;
      case Op::Dia: prefix("dia"); break;
      case Op::ObligM: prefix("O"); break;
      case Op::Perm: prefix("P"); break;
      case Op::Forb: prefix("F"); break;
      case Op::Oblig:
        if (f.rhs().is_top()) {
          prefix("O");
        } else {
          os << "O{";
          print_rec(f.lhs(), os, 0, true, true);
          os << " | ";
          print_rec(f.rhs(), os, 0, true, false);
          os << '}';
        }
        break;
      case Op::Forall:
      case Op::Exists:
        os << (f.op() == Op::Forall ? "forall " : "exists ") << f.name() << ". ";
        print_rec(f.lhs(), os, 0, rightmost, no_bar);
        break;
    }
  }
  if (parens) os << ')';
}

}  // namespace

std::string print(const Formula& f) {
  std::ostringstream os;
  print_rec(f, os, 0, true, false);
  return os.str();
}

// ---------------------------------------------------------------------------
// Structural utilities

namespace {

template <typename Fn>
void preorder(const Formula& f, Fn&& fn) {
  fn(f);
  if (f.is_atom()) return;
  preorder(f.lhs(), fn);
  if (f.is_binary()) preorder(f.rhs(), fn);
}

}  // namespace

std::vector<Formula> subformulas(const std::vector<Formula>& fs) {
  std::vector<Formula> out;
  std::set<Formula> seen;
  for (const Formula& root : fs) {
    preorder(root, [&](const Formula& g) {
      if (seen.insert(g).second) out.push_back(g);
    });
  }
  return out;
}

std::vector<Formula> subformulas(const Formula& f) { return subformulas(std::vector<Formula>{f}); }

std::size_t size(const Formula& f) {
  std::size_t n = 0;
  preorder(f, [&](const Formula&) { ++n; });
  return n;
}

std::set<std::string> free_vars(const Formula& f) {
  std::set<std::string> out;
  std::function<void(const Formula&, std::vector<std::string>&)> rec =
      [&](const Formula& g, std::vector<std::string>& bound) {
        if (g.is_atom()) {
          for (const Term& t : g.args()) {
            if (t.is_var() && std::find(bound.begin(), bound.end(), t.name) == bound.end()) {
              out.insert(t.name);
            }
          }
          return;
        }
        if (g.is_quantifier()) {
          bound.push_back(g.name());
          rec(g.lhs(), bound);
          bound.pop_back();
          return;
        }
        rec(g.lhs(), bound);
        if (g.is_binary()) rec(g.rhs(), bound);
      };
  std::vector<std::string> bound;
  rec(f, bound);
  return out;
}

bool is_closed(const Formula& f) { return free_vars(f).empty(); }

bool is_ground(const Formula& f) {
  bool ok = true;
  preorder(f, [&](const Formula& g) {
    if (g.is_quantifier()) ok = false;
    if (g.is_atom()) {
      for (const Term& t : g.args()) ok = ok && !t.is_var();
    }
  });
  return ok;
}

bool is_propositional(const Formula& f) {
  bool ok = true;
  preorder(f, [&](const Formula& g) { ok = ok && !g.is_modal(); });
  return ok;
}

namespace {

Formula rebuild(const Formula& f, const Formula& a, const Formula& b) {
  switch (f.op()) {
    case Op::Not: return Formula::negation(a);
    case Op::And: return Formula::conj(a, b);
    case Op::Or: return Formula::disj(a, b);
    case Op::Implies: return Formula::implies(a, b);
    case Op::Iff: return Formula::iff(a, b);
    case Op::Box: return Formula::box(a);
    case Op::Dia: return Formula::dia(a);
    case Op::Oblig: return Formula::oblig(a, b);
    case Op::ObligM: return Formula::oblig_m(a);
    case Op::Perm: return Formula::perm(a);
    case Op::Forb: return Formula::forb(a);
    case Op::Forall: return Formula::forall(f.name(), a);
    case Op::Exists: return Formula::exists(f.name(), a);
    case Op::Atom: break;
  }
  return f;
}

template <typename Fn>
Formula map_children(const Formula& f, Fn&& fn) {
  Formula a = fn(f.lhs());
  Formula b = f.is_binary() ? fn(f.rhs()) : Formula();
  return rebuild(f, a, b);
}

}  // namespace

Formula substitute(const Formula& f, const std::string& var, const Term& t) {
  if (f.is_atom()) {
    std::vector<Term> args = f.args();
    bool changed = false;
    for (Term& a : args) {
      if (a.is_var() && a.name == var) {
        a = t;
        changed = true;
      }
    }
    return changed ? Formula::atom(f.name(), std::move(args)) : f;
  }
  if (f.is_quantifier() && f.name() == var) return f;  // shadowed
  return map_children(f, [&](const Formula& g) { return substitute(g, var, t); });
}

Formula instantiate(const Formula& schema, const std::map<std::string, Formula>& holes) {
  if (schema.is_atom()) {
    if (!schema.args().empty()) return schema;
    auto it = holes.find(schema.name());
    return it == holes.end() ? schema : it->second;
  }
  return map_children(schema, [&](const Formula& g) { return instantiate(g, holes); });
}

Formula ground(const Formula& f, const std::vector<std::string>& domain) {
  if (domain.empty()) throw std::invalid_argument("cannot ground over an empty domain");
  if (f.is_atom()) return f;
  if (f.is_quantifier()) {
    std::optional<Formula> acc;
    for (const std::string& c : domain) {
      Formula inst = ground(substitute(f.lhs(), f.name(), Term::constant(c)), domain);
      if (!acc) {
        acc = inst;
      } else {
        acc = f.op() == Op::Forall ? Formula::conj(*acc, inst) : Formula::disj(*acc, inst);
      }
    }
    return *acc;
  }
  return map_children(f, [&](const Formula& g) { return ground(g, domain); });
}

std::string atom_key(const std::string& pred, const std::vector<Term>& args) {
  std::string s = pred;
  if (!args.empty()) {
    s += '(';
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i) s += ',';
      s += args[i].name;
    }
    s += ')';
  }
  return s;
}

std::set<std::string> ground_atoms(const Formula& f) {
  std::set<std::string> out;
  preorder(f, [&](const Formula& g) {
    if (g.is_atom() && g.name() != kTopAtom) out.insert(atom_key(g.name(), g.args()));
  });
  return out;
}

void check_language(const Formula& f, Logic logic) {
  preorder(f, [&](const Formula& g) {
    if (logic == Logic::Sdl && g.op() == Op::Oblig) {
      throw std::invalid_argument("dyadic obligation is not part of SDL: " + print(g));
    }
  });
}

Formula to_language(const Formula& f, Logic logic) {
  if (f.is_atom()) return f;
  if (logic == Logic::Sdl && f.op() == Op::Oblig) {
    throw std::invalid_argument("dyadic obligation is not part of SDL: " + print(f));
  }
  Formula g = map_children(f, [&](const Formula& h) { return to_language(h, logic); });
  if (logic == Logic::E && g.op() == Op::ObligM) return Formula::oblig(g.lhs(), Formula::top());
  return g;
}

}  // namespace deon
