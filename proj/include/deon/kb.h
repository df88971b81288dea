// Normative knowledge bases: the line-oriented file format, grounding over
// a finite domain, and the consistency / entailment / compliance tasks.
#ifndef DEON_KB_H
#define DEON_KB_H

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "deon/formula.h"
#include "deon/search.h"

namespace deon {

struct Norm {
  enum class Kind { Obligation, Permission, Prohibition };
  std::string id;
  Kind kind = Kind::Obligation;
  Formula body = Formula::top();
  Formula condition = Formula::top();
  std::vector<std::string> binders;
  int line = 0;
};

std::string_view to_string(Norm::Kind k);

struct KnowledgeBase {
  Signature signature;
  std::vector<std::string> individuals;
  std::vector<Norm> norms;
  std::vector<Formula> facts;       // propositional, possibly quantified
  std::vector<Formula> background;  // closed formulas added as written
};

class KbError : public std::runtime_error {
 public:
  KbError(const std::string& msg, int line);
  int line() const { return line_; }

 private:
  int line_;
};

// Format:
//   [signature]    pred <name>/<arity> | const <name>
//   [individuals]  names separated by spaces or commas
//   [norms]        <id>: O{ <body> | <cond> } [forall <v1>, <v2>]   (also P{..}, F{..})
//   [facts]        one formula per line
//   [background]   one formula per line
// '#' starts a comment. Individuals are also constants of the signature.
KnowledgeBase load_kb(std::string_view text);
KnowledgeBase load_kb_file(const std::string& path);

// A unit of the grounded KB: one norm instance, fact or background formula.
struct GroundItem {
  std::string label;  // "A1[d=d1]", "fact:~p(d1)", "background:p"
  std::string norm_id;  // empty for facts and background
  std::vector<Formula> formulas;
};

// Norm instances in declaration order, then facts, then background. In E,
// norms become O(b/c), ~O(~b/c), O(~b/c) and facts are boxed. In SDL a
// conditional obligation becomes {c -> O b, O(c -> b)}, a permission
// c -> P b, and facts are asserted globally as written.
std::vector<GroundItem> ground_items(const KnowledgeBase& kb, Logic logic);
std::vector<Formula> ground_kb(const KnowledgeBase& kb, Logic logic);

// Grounds quantifiers over the KB's individuals and adapts O to the logic.
Formula ground_query(const KnowledgeBase& kb, const Formula& query, Logic logic);

struct TaskResult {
  Verdict verdict;
  std::vector<GroundItem> items;
  std::vector<std::string> mus;  // labels; set when unsatisfiable in complete mode
};

TaskResult consistency(const KnowledgeBase& kb, const SearchConfig& cfg);
TaskResult entailment(const KnowledgeBase& kb, const Formula& query, const SearchConfig& cfg);

struct Detachment {
  std::string label;
  std::string norm_id;
  Formula body = Formula::top();  // negated for prohibitions
};

struct ComplianceReport {
  std::vector<Detachment> detached;
  std::vector<Detachment> violations;
  bool consistent = false;
  TaskResult consistency;
};

// A ground obligation or prohibition is detached when the facts
// propositionally entail its condition, and violated when they entail the
// negation of its (detached) body. Throws KbError on contradictory facts.
ComplianceReport compliance(const KnowledgeBase& kb, const SearchConfig& cfg);

// Propositional entailment over ground atoms; modal subformulas are rejected.
bool propositionally_entails(const std::vector<Formula>& premises, const Formula& goal);

}  // namespace deon

#endif  // DEON_KB_H
