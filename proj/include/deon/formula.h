// Object-language syntax for SDL and Aqvist's system E: formulas with
// Boolean connectives, alethic box/diamond, monadic and dyadic obligation,
// permission, prohibition, and finite-domain quantifiers.
#ifndef DEON_FORMULA_H
#define DEON_FORMULA_H

#include <compare>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace deon {

enum class Logic { Sdl, E };

std::string_view to_string(Logic logic);
Logic logic_from_string(std::string_view s);

// Reserved propositional atom used to build the derived forms of true/false.
// The lexer never produces it, so it cannot clash with user predicates.
inline constexpr std::string_view kTopAtom = "__t";

class Signature {
 public:
  void add_predicate(const std::string& name, int arity);
  void add_constant(const std::string& name);

  bool has_predicate(const std::string& name) const { return predicates_.count(name) != 0; }
  bool has_constant(const std::string& name) const { return constants_.count(name) != 0; }
  int arity(const std::string& name) const;

  const std::map<std::string, int>& predicates() const { return predicates_; }
  const std::set<std::string>& constants() const { return constants_; }

  static bool valid_name(std::string_view name);

 private:
  std::map<std::string, int> predicates_;
  std::set<std::string> constants_;
};

struct Term {
  enum class Kind { Const, Var };
  Kind kind = Kind::Const;
  std::string name;

  static Term constant(std::string n) { return {Kind::Const, std::move(n)}; }
  static Term variable(std::string n) { return {Kind::Var, std::move(n)}; }
  bool is_var() const { return kind == Kind::Var; }

  auto operator<=>(const Term&) const = default;
};

enum class Op {
  Atom,
  Not,
  And,
  Or,
  Implies,
  Iff,
  Box,
  Dia,
  Oblig,   // O{body | condition}
  ObligM,  // monadic O, primitive in SDL only
  Perm,
  Forb,
  Forall,
  Exists,
};

// Immutable, structurally shared formula tree. Copying is cheap.
class Formula {
 public:
  Formula();  // the atom __t; only useful as a placeholder

  static Formula atom(std::string pred, std::vector<Term> args = {});
  static Formula negation(Formula f);
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula implies(Formula a, Formula b);
  static Formula iff(Formula a, Formula b);
  static Formula box(Formula f);
  static Formula dia(Formula f);
  static Formula oblig(Formula body, Formula condition);
  static Formula oblig_m(Formula f);
  static Formula perm(Formula f);
  static Formula forb(Formula f);
  static Formula forall(std::string var, Formula f);
  static Formula exists(std::string var, Formula f);
  static Formula top();
  static Formula bottom();

  Op op() const;
  // Predicate name for atoms, bound variable for quantifiers.
  const std::string& name() const;
  const std::vector<Term>& args() const;
  // First operand (body for Oblig, scope for quantifiers).
  Formula lhs() const;
  // Second operand (condition for Oblig).
  Formula rhs() const;

  bool is_top() const;
  bool is_bottom() const;
  bool is_atom() const { return op() == Op::Atom; }
  bool is_binary() const;
  bool is_quantifier() const { return op() == Op::Forall || op() == Op::Exists; }
  bool is_modal() const;

  friend bool operator==(const Formula& a, const Formula& b);
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b);

  struct Node;  // opaque

 private:
  explicit Formula(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

enum class ParseMode {
  Sdl,  // monadic O primitive, dyadic O{..|..} rejected
  E,    // monadic O eliminated to O{phi | true}
  Any,  // both forms kept as written
};

ParseMode parse_mode(Logic logic);

struct ParseOptions {
  ParseMode mode = ParseMode::E;
  // Declare unknown predicates/constants on first use instead of failing.
  bool open_signature = false;
  // Variables treated as bound in the whole text (KB norm binders).
  std::vector<std::string> bound;
};

Formula parse(std::string_view text, const Signature& sig, const ParseOptions& opts = {});
// Parses with an open signature and returns it alongside the formula.
Formula parse_open(std::string_view text, Signature& sig, ParseMode mode = ParseMode::E);

std::string print(const Formula& f);

// Pre-order, duplicate-free; f first.
std::vector<Formula> subformulas(const Formula& f);
std::vector<Formula> subformulas(const std::vector<Formula>& fs);
std::size_t size(const Formula& f);
std::set<std::string> free_vars(const Formula& f);
bool is_closed(const Formula& f);
bool is_ground(const Formula& f);  // no quantifiers and no variables
bool is_propositional(const Formula& f);  // no modal operators

Formula substitute(const Formula& f, const std::string& var, const Term& t);
// Replaces 0-ary atoms by formulas (schema instantiation).
Formula instantiate(const Formula& schema, const std::map<std::string, Formula>& holes);
// Expands quantifiers over a finite constant domain.
Formula ground(const Formula& f, const std::vector<std::string>& domain);

// Ground atoms occurring in f, printed as "pred(c1,c2)" or "p"; __t excluded.
std::set<std::string> ground_atoms(const Formula& f);
std::string atom_key(const std::string& pred, const std::vector<Term>& args);

// Throws std::invalid_argument if f uses operators outside the logic's language.
void check_language(const Formula& f, Logic logic);
// Rewrites monadic O into O{phi | true} (E) or rejects dyadic O (SDL).
Formula to_language(const Formula& f, Logic logic);

}  // namespace deon

#endif  // DEON_FORMULA_H
