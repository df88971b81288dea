// Exhaustive validity suites shared by the unit tests and the acceptance run.
#ifndef DEON_TESTS_SUITES_H
#define DEON_TESTS_SUITES_H

#include <string>
#include <vector>

#include "deon/formula.h"
#include "deon/semantics.h"
#include "oracle.h"

namespace suites {

using deon::Formula;
using deon::Logic;

struct Schema {
  std::string name;
  std::string text;  // over the holes A, B, C
};

inline const std::vector<Schema>& e_axioms() {
  static const std::vector<Schema> s{
      {"PL1", "A | ~A"},
      {"PL2", "(A -> B) -> (~B -> ~A)"},
      {"PL3", "((A -> B) -> A) -> A"},
      {"K", "box (A -> B) -> (box A -> box B)"},
      {"4", "box A -> box box A"},
      {"5", "~box A -> box ~box A"},
      {"COK", "O{B -> C | A} -> (O{B | A} -> O{C | A})"},
      {"Id", "O{A | A}"},
      {"Sh", "O{C | A & B} -> O{B -> C | A}"},
      {"Abs", "O{B | A} -> box O{B | A}"},
      {"Nec", "box B -> O{B | A}"},
      {"Ext", "box (A <-> B) -> (O{C | A} <-> O{C | B})"},
  };
  return s;
}

inline const std::vector<Schema>& kd_axioms() {
  static const std::vector<Schema> s{
      {"K", "O (A -> B) -> (O A -> O B)"},
      {"D", "O A -> P A"},
      {"D'", "~(O A & O ~A)"},
  };
  return s;
}

// Every instance of the schemas with holes mapped to atoms p, q, r.
inline std::vector<Formula> instances(const std::vector<Schema>& schemas, Logic logic) {
  const std::vector<std::string> atoms{"p", "q", "r"};
  std::vector<Formula> out;
  for (const Schema& s : schemas) {
    deon::Signature sig;
    const Formula schema = deon::parse_open(s.text, sig, deon::parse_mode(logic));
    for (const auto& a : atoms) {
      for (const auto& b : atoms) {
        for (const auto& c : atoms) {
          out.push_back(deon::instantiate(
              schema, {{"A", Formula::atom(a)}, {"B", Formula::atom(b)}, {"C", Formula::atom(c)}}));
        }
      }
    }
  }
  return out;
}

struct Tally {
  long models = 0;
  long checks = 0;
  long failures = 0;
  long oracle_checks = 0;
  long oracle_failures = 0;
  std::string first_failure;
};

// Checks every formula in every model with 1..max_n worlds over p, q, r
// whose relation satisfies `fc`. Every `stride`-th model is re-evaluated by
// the reference evaluator.
inline Tally exhaustive(const std::vector<Formula>& fs, Logic logic, const deon::FrameConditions& fc, int max_n,
                        long stride = 61) {
  Tally t;
  const std::vector<std::string> atoms{"p", "q", "r"};
  const deon::CompiledFormulas compiled(fs, logic, atoms);
  std::vector<deon::WorldSet> out;
  for (int n = 1; n <= max_n; ++n) {
    std::vector<deon::WorldSet> rel(static_cast<std::size_t>(n));
    std::vector<deon::WorldSet> val(atoms.size());
    const deon::WorldSet all = deon::all_worlds(n);
    for (std::uint64_t r = 0; r < (std::uint64_t{1} << (n * n)); ++r) {
      for (int s = 0; s < n; ++s) rel[s] = (r >> (s * n)) & all;
      if (!deon::satisfies(n, rel.data(), fc)) continue;
      for (std::uint64_t v = 0; v < (std::uint64_t{1} << (n * 3)); ++v) {
        for (std::size_t a = 0; a < atoms.size(); ++a) val[a] = (v >> (a * n)) & all;
        ++t.models;
        compiled.eval(n, rel.data(), val.data(), out);
        for (std::size_t i = 0; i < fs.size(); ++i) {
          ++t.checks;
          if (out[i] != all) {
            if (!t.failures) t.first_failure = deon::print(fs[i]);
            ++t.failures;
          }
        }
        if (t.models % stride == 0) {
          deon::Model m(n);
          m.rel = rel;
          for (std::size_t a = 0; a < atoms.size(); ++a) m.set_atom(atoms[a], val[a]);
          const oracle::OModel om = oracle::from(m);
          if (!oracle::frame_ok(om, fc)) ++t.oracle_failures;
          for (const Formula& f : fs) {
            ++t.oracle_checks;
            if (!oracle::valid(om, f, logic)) ++t.oracle_failures;
          }
        }
      }
    }
  }
  return t;
}

}  // namespace suites

#endif  // DEON_TESTS_SUITES_H
