// Finite model search and bounded decision for ground SDL / system-E
// formula sets: consistency, entailment, validity, frame correspondence,
// and minimal unsatisfiable subsets.
#ifndef DEON_SEARCH_H
#define DEON_SEARCH_H

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "deon/formula.h"
#include "deon/semantics.h"

namespace deon {

inline constexpr std::uint64_t kDefaultNodeBudget = 10'000'000;
// Largest atoms + modal keys handled by the complete decision procedures.
inline constexpr int kMaxCompleteVariables = 22;
// Largest subformula count accepted by decide_valid in complete mode.
inline constexpr int kMaxCompleteSubformulas = 20;

// DEON_NODE_BUDGET if set to a positive integer, else the default.
std::uint64_t default_node_budget();

struct SearchConfig {
  Logic logic = Logic::E;
  FrameConditions frame;
  int max_worlds = 3;
  bool complete = false;
  std::uint64_t seed = 0;  // corpus generation only; search is deterministic
  std::uint64_t node_budget = default_node_budget();
  int workers = 1;
};

struct Verdict {
  enum class Kind {
    ModelFound,
    NoModelUpTo,
    DecidedUnsatisfiable,
    Valid,
    CountermodelFound,
    BudgetExceeded,
  };
  Kind kind = Kind::NoModelUpTo;
  std::optional<Model> model;
  int world = -1;              // falsifying world of a countermodel
  int max_worlds = 0;          // NoModelUpTo / BudgetExceeded: sizes searched
  int subformulas = 0;         // decided verdicts: bound is 2^subformulas worlds
  std::string method;          // "enumeration", "type-elimination", "rigid-guess"
  std::uint64_t nodes = 0;

  bool positive() const;       // model found / valid
  bool decided() const;
};

std::string to_string(Verdict::Kind k);

class SearchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// First model (canonical order) in which every formula is valid.
Verdict find_model(const std::vector<Formula>& fs, const SearchConfig& cfg);

// Model validating every assumption and falsifying the goal somewhere.
Verdict entails(const std::vector<Formula>& assumptions, const Formula& goal, const SearchConfig& cfg);

// entails({}, f); complete mode rejects more than kMaxCompleteSubformulas.
Verdict decide_valid(const Formula& f, const SearchConfig& cfg);

struct CorrespondenceReport {
  // (a): schema valid in every frame-satisfying model up to frame_bound worlds.
  bool frame_implies_schema = true;
  int frame_bound = 0;
  std::optional<Model> counterexample;
  int counterexample_world = -1;
  // (b): some frame-violating model validates the schema under every valuation.
  bool converse_fails = false;
  int converse_bound = 0;
  std::optional<Model> witness;  // relation only; atoms listed with empty truth sets
  std::vector<FrameCheck> witness_frame;
  std::uint64_t nodes = 0;
};

// `schema` is a ground formula over its own atoms (e.g. p, q, r). Throws
// SearchError when the node budget is exhausted.
CorrespondenceReport correspondence(const Formula& schema, const FrameConditions& frame,
                                    const SearchConfig& cfg, int converse_bound);

// True iff `f` is valid at every world of the frame (m.rel) under every
// valuation of its atoms.
bool frame_valid(int n, const std::vector<WorldSet>& rel, const Formula& f, Logic logic);

// Deletion-based shrinking over groups (a group is satisfiable together or
// not at all). Requires cfg.complete and an unsatisfiable union. Returns
// indices of the kept groups; the result is re-verified before returning.
std::vector<std::size_t> minimal_unsat_subset(const std::vector<std::vector<Formula>>& groups,
                                              const SearchConfig& cfg);
std::vector<Formula> minimal_unsat_subset(const std::vector<Formula>& fs, const SearchConfig& cfg);

}  // namespace deon

#endif  // DEON_SEARCH_H
