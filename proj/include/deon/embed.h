// Shallow semantical embedding of SDL and system E into the typed lambda
// kernel, and the lowering of normal forms to two-sorted first-order logic
// with TPTP output.
#ifndef DEON_EMBED_H
#define DEON_EMBED_H

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "deon/formula.h"
#include "deon/lambda.h"
#include "deon/semantics.h"

namespace deon {

// Relation constants: accessibility (SDL) and betterness (E).
inline constexpr const char* kAccess = "R";
inline constexpr const char* kBetter = "Rb";
// Actual-world constant used for local validity.
inline constexpr const char* kActualWorld = "aw";

// Embeds a formula as a term of type i -> o. Quantifiers become the lifted
// possibilist quantifiers over individuals of type e. Throws
// std::invalid_argument on operators outside the logic's language.
LTerm embed_sdl(const Formula& f);
LTerm embed_e(const Formula& f);
LTerm embed(const Formula& f, Logic logic);

// Global validity: forall z. t z. Throws TypeError unless t : i -> o.
LTerm vld(const LTerm& t);
// Local validity: t aw.
LTerm local(const LTerm& t);

// The defined constants of the embeddings, for inspection and printing.
LTerm sdl_box();
LTerm sdl_dia();
LTerm e_box();
LTerm e_oblig();

enum class Sort { World, Indiv };

struct FOTerm {
  std::string name;
  Sort sort = Sort::World;
  bool is_var = true;

  friend bool operator==(const FOTerm&, const FOTerm&) = default;
};

// Two-sorted first-order formula. `sub` holds the operands.
struct FOFormula {
  enum class Kind { True, False, Pred, Not, And, Or, Implies, Iff, Forall, Exists };
  Kind kind = Kind::True;
  std::string name;  // predicate, or bound variable of a quantifier
  Sort sort = Sort::World;
  std::vector<FOTerm> args;
  std::vector<FOFormula> sub;

  static FOFormula pred(std::string name, std::vector<FOTerm> args);
  static FOFormula unary(Kind k, FOFormula a);
  static FOFormula binary(Kind k, FOFormula a, FOFormula b);
  static FOFormula quant(Kind k, std::string var, Sort sort, FOFormula body);

  friend bool operator==(const FOFormula&, const FOFormula&) = default;
};

class HigherOrderResidue : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reads a beta-eta-normal term of type o as a first-order formula. Bound
// variables are renamed W0, W1.. / X0, X1.. by nesting depth; vacuous
// quantifiers are dropped.
FOFormula lower(const LTerm& t);

// Full pipeline: normalize(vld(embed(f))) lowered, or local validity at aw.
FOFormula translate(const Formula& f, Logic logic, bool local_validity = false);

std::set<std::string> fo_free_vars(const FOFormula& f);
// Every quantifier whose body has more than one free variable is guarded
// by an accessibility atom mentioning all of them.
bool is_guarded(const FOFormula& f);

// Reads `R`/`Rb` from the model's relation and predicate atoms from its
// valuation (key "pred(c1,..)"; trailing world argument). Individual
// quantifiers range over `domain`. `aw` denotes `actual_world`.
bool fo_eval(const FOFormula& f, const Model& m, int actual_world = 0);

std::string to_string(const FOFormula& f);

// One TPTP FOF clause; sorts are encoded by world/1 and indiv/1 guards.
std::string emit_tptp(const FOFormula& f, const std::string& name, const std::string& role);

// Complete problem: sort axioms, individual constants, seriality (SDL),
// and the conjecture.
std::string emit_tptp_problem(const FOFormula& conjecture, const std::string& name, Logic logic,
                              const std::vector<std::string>& individuals = {});

}  // namespace deon

#endif  // DEON_EMBED_H
