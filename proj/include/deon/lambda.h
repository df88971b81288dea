// Simply typed lambda terms: the classical higher-order meta-logic into which
// the deontic languages are embedded.
//
// Terms are locally nameless: bound variables are de Bruijn indices, free
// variables and constants carry names. Binder names survive only as printing
// hints, so alpha-equivalence is structural equality.
#ifndef DEON_LAMBDA_H
#define DEON_LAMBDA_H

#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace deon {

class SimpleType {
 public:
  enum class Kind { O, I, E, Arrow };  // Booleans, worlds, individuals, functions

  static SimpleType o();
  static SimpleType i();
  static SimpleType e();
  static SimpleType arrow(SimpleType from, SimpleType to);
  static SimpleType arrows(const std::vector<SimpleType>& args, SimpleType result);
  // i -> o, the type of embedded propositions.
  static SimpleType prop();

  Kind kind() const { return node_->kind; }
  bool is_arrow() const { return kind() == Kind::Arrow; }
  bool is_base() const { return !is_arrow(); }
  const SimpleType& from() const;
  const SimpleType& to() const;

  std::string str() const;

  friend bool operator==(const SimpleType& a, const SimpleType& b);

 private:
  struct Node {
    Kind kind;
    std::shared_ptr<const SimpleType> from;
    std::shared_ptr<const SimpleType> to;
  };
  explicit SimpleType(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

class TypeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LTerm {
 public:
  enum class Kind { Const, Free, Bound, Abs, App };

  // Primitive or uninterpreted constant.
  static LTerm constant(std::string name, SimpleType type);
  // Constant with a definiens; unfolded by normalization.
  static LTerm defined(std::string name, SimpleType type, LTerm definiens);
  static LTerm var(std::string name, SimpleType type);
  // Abstracts the free variable (name, type) in body.
  static LTerm lam(const std::string& name, const SimpleType& type, const LTerm& body);
  static LTerm app(LTerm fun, LTerm arg);
  static LTerm app(LTerm fun, const std::vector<LTerm>& args);
  // Low-level constructors over the locally nameless representation.
  static LTerm bound(int index);
  static LTerm abstraction(std::string hint, SimpleType type, LTerm closed_body);

  Kind kind() const { return node_->kind; }
  bool is(Kind k) const { return kind() == k; }
  // Name of constants and free variables; binder hint for abstractions.
  const std::string& name() const { return node_->name; }
  // Type of constants and free variables; binder type for abstractions.
  const SimpleType& type() const;
  int index() const { return node_->index; }
  const LTerm& body() const;  // Abs
  const LTerm& fun() const;   // App
  const LTerm& arg() const;   // App
  const LTerm& definiens() const;

  bool is_defined() const { return is(Kind::Const) && node_->def != nullptr; }
  std::size_t size() const;

  // Replaces the outermost bound index of an abstraction body by `with`.
  static LTerm open(const LTerm& body, const LTerm& with);
  // Turns free variable `name` into the bound index of a new outer binder.
  static LTerm close(const LTerm& t, const std::string& name);

  // Structural equality, which is alpha-equivalence for this representation.
  friend bool operator==(const LTerm& a, const LTerm& b);

 private:
  struct Node {
    Kind kind;
    std::string name;
    std::optional<SimpleType> type;
    int index = 0;
    std::shared_ptr<const LTerm> a;
    std::shared_ptr<const LTerm> b;
    std::shared_ptr<const LTerm> def;
  };
  explicit LTerm(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

SimpleType type_of(const LTerm& t);

bool alpha_eq(const LTerm& a, const LTerm& b);

std::set<std::string> free_vars(const LTerm& t);

// Capture-avoiding [s/x]t for the free variable x of type x_type.
LTerm substitute(const LTerm& t, const std::string& x, const SimpleType& x_type, const LTerm& s);

enum class Strategy { LeftmostOutermost, RightmostInnermost };

// One beta step at the position the strategy selects, if any redex exists.
std::optional<LTerm> beta_step(const LTerm& t, Strategy s);
// Replaces every defined constant by its (recursively unfolded) definiens.
LTerm unfold(const LTerm& t);
LTerm eta_normalize(const LTerm& t);
// Renames binder hints to w0,w1.. (worlds), x0,x1.. (individuals), f0.. (other).
LTerm canonical_names(const LTerm& t);
// Delta-unfold, beta-exhaust under the strategy, then eta; alpha-canonical.
LTerm normalize(const LTerm& t, Strategy s = Strategy::LeftmostOutermost);
bool is_beta_normal(const LTerm& t);

// Step-by-step conversion: one delta-unfold or beta contraction per entry,
// innermost redexes first. The first entry is t itself.
std::vector<LTerm> conversion_steps(const LTerm& t);

struct PrintOptions {
  bool show_types = false;
  // Show Pi(\x. b) as "forall x. b" and ~Pi(\x. ~b) as "exists x. b". The
  // defined existential applied to an abstraction always prints as a binder.
  bool fold_quantifiers = false;
};
std::string to_string(const LTerm& t, const PrintOptions& opts = {});

// Logical vocabulary. Primitives are ~, |, Pi_a; &, ->, <-> are kept as
// logical constants as well so normal forms stay readable; exists is a
// defined constant (~Pi(\x. ~ phi x)).
namespace hol {

inline constexpr const char* kNot = "¬";
inline constexpr const char* kOr = "∨";
inline constexpr const char* kAnd = "∧";
inline constexpr const char* kImp = "→";
inline constexpr const char* kIff = "↔";
inline constexpr const char* kPi = "Π";
inline constexpr const char* kSigma = "∃";

LTerm neg();
LTerm disj();
LTerm conj();
LTerm imp();
LTerm iff();
LTerm pi(const SimpleType& domain);
LTerm sigma(const SimpleType& domain);

LTerm neg(const LTerm& a);
LTerm disj(const LTerm& a, const LTerm& b);
LTerm conj(const LTerm& a, const LTerm& b);
LTerm imp(const LTerm& a, const LTerm& b);
LTerm iff(const LTerm& a, const LTerm& b);
// forall/exists over the abstraction of free variable (name, type) in body.
LTerm forall(const std::string& name, const SimpleType& type, const LTerm& body);
LTerm exists(const std::string& name, const SimpleType& type, const LTerm& body);

bool is_logical_constant(const LTerm& t);

}  // namespace hol

}  // namespace deon

#endif  // DEON_LAMBDA_H
