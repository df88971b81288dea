// Finite Kripke models (SDL) and preference models (system E), with direct
// truth-set evaluation of ground formulas.
#ifndef DEON_SEMANTICS_H
#define DEON_SEMANTICS_H

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "deon/formula.h"

namespace deon {

// Bitset of worlds 0..n-1.
using WorldSet = std::uint64_t;
inline constexpr int kMaxWorlds = 64;

inline WorldSet all_worlds(int n) { return n >= 64 ? ~WorldSet{0} : (WorldSet{1} << n) - 1; }
inline bool contains(WorldSet s, int w) { return (s >> w) & 1u; }

// One structure serves both logics: `rel` is accessibility in SDL and the
// betterness relation (s >= t) in E.
struct Model {
  int worlds = 1;
  std::vector<WorldSet> rel;         // rel[s] has bit t iff s R t
  std::vector<std::string> atoms;    // ground atom keys, e.g. "erase(d1)"
  std::vector<WorldSet> valuation;   // parallel to atoms
  std::vector<std::string> domain;   // individual constants

  Model() = default;
  explicit Model(int n);

  bool related(int s, int t) const { return contains(rel[s], t); }
  void relate(int s, int t) { rel[s] |= WorldSet{1} << t; }
  // Sets the truth set of an atom, adding it if new.
  void set_atom(const std::string& key, WorldSet truth);
  std::optional<WorldSet> atom(const std::string& key) const;
  // Throws std::invalid_argument if the shape is inconsistent.
  void validate() const;
};

bool operator==(const Model& a, const Model& b);

// World permutation: world s of m becomes perm[s].
Model permute(const Model& m, const std::vector<int>& perm);

// {s in S | s >= t for all t in S}
WorldSet opt(const Model& m, WorldSet s);

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Truth set of a ground formula. Throws EvalError on quantifiers, unknown
// atoms, or operators outside the logic (dyadic O in SDL).
WorldSet truth_set(const Model& m, const Formula& f, Logic logic);
bool eval(const Model& m, int world, const Formula& f, Logic logic);
bool valid_in_model(const Model& m, const Formula& f, Logic logic);

// Formulas compiled against a fixed atom list, evaluated on many models.
class CompiledFormulas {
 public:
  CompiledFormulas(const std::vector<Formula>& roots, Logic logic,
                   const std::vector<std::string>& atoms);

  // Truth sets of every root, given relation rows and atom masks.
  void eval(int n, const WorldSet* rel, const WorldSet* valuation, std::vector<WorldSet>& out) const;
  std::size_t roots() const { return roots_.size(); }

 private:
  enum class Code { Atom, False, Not, And, Or, Implies, Iff, BoxK, DiaK, BoxU, DiaU, Oblig };
  struct Instr {
    Code code;
    int a = -1;
    int b = -1;
  };
  std::vector<Instr> prog_;
  std::vector<int> roots_;
};

struct FrameConditions {
  bool serial = false;
  bool reflexive = false;
  bool total = false;
  bool transitive = false;

  bool any() const { return serial || reflexive || total || transitive; }
  friend bool operator==(const FrameConditions&, const FrameConditions&) = default;
};

// Parses "reflexive,total,transitive" (and "serial"); empty string is none.
FrameConditions parse_frame(const std::string& text);
std::string to_string(const FrameConditions& fc);

struct FrameCheck {
  std::string condition;
  bool holds = true;
  std::vector<int> witness;  // world, pair or triple violating the condition
};

std::vector<FrameCheck> check_frame(const Model& m, const FrameConditions& fc);
bool satisfies(const Model& m, const FrameConditions& fc);

// Relation row test shared by the enumerators.
bool satisfies(int n, const WorldSet* rel, const FrameConditions& fc);

// JSON text: {"worlds":n,"relation":[[s,t],..],"valuation":{atom:[w,..]},"domain":[..]}
std::string model_to_json(const Model& m, int indent = -1);
Model model_from_json(const std::string& text);

}  // namespace deon

#endif  // DEON_SEMANTICS_H
