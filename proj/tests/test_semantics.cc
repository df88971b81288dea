#include "deon/semantics.h"

#include "doctest.h"
#include "generators.h"
#include "oracle.h"
#include "suites.h"

using namespace deon;

namespace {

Formula P(const std::string& s, ParseMode mode = ParseMode::E) {
  Signature sig;
  return parse_open(s, sig, mode);
}

Model two_worlds() {
  // 0 >= 1 only: world 0 is the best q-world.
  Model m(2);
  m.relate(0, 0);
  m.relate(0, 1);
  m.relate(1, 1);
  m.set_atom("p", 0b01);
  m.set_atom("q", 0b11);
  return m;
}

}  // namespace

TEST_CASE("best worlds") {
  Model m = two_worlds();
  CHECK(opt(m, 0b11) == 0b01);
  CHECK(opt(m, 0b10) == 0b10);
  CHECK(opt(m, 0) == 0);
  m.rel[1] = 0;
  CHECK(opt(m, 0b10) == 0);
}

TEST_CASE("dyadic obligation in a hand-built model") {
  const Model m = two_worlds();
  CHECK(valid_in_model(m, P("O{p | q}"), Logic::E));
  CHECK_FALSE(valid_in_model(m, P("O{~p | q}"), Logic::E));
  CHECK(valid_in_model(m, P("O{~p | ~p}"), Logic::E));
  CHECK(valid_in_model(m, P("box q"), Logic::E));
  CHECK(truth_set(m, P("dia ~p"), Logic::E) == 0b11);
  CHECK(truth_set(m, P("P p"), Logic::E) == 0b11);
}

TEST_CASE("SDL operators in a Kripke model") {
  Model m(2);
  m.relate(0, 1);
  m.relate(1, 1);
  m.set_atom("p", 0b10);
  CHECK(truth_set(m, P("O p", ParseMode::Sdl), Logic::Sdl) == 0b11);
  CHECK(truth_set(m, P("box p", ParseMode::Sdl), Logic::Sdl) == 0b11);
  CHECK(truth_set(m, P("F p", ParseMode::Sdl), Logic::Sdl) == 0);
  CHECK(truth_set(m, P("P ~p", ParseMode::Sdl), Logic::Sdl) == 0);
  CHECK(truth_set(m, P("p", ParseMode::Sdl), Logic::Sdl) == 0b10);
}

TEST_CASE("evaluation errors") {
  const Model m = two_worlds();
  CHECK_THROWS_AS(truth_set(m, P("forall x. Q(x)"), Logic::E), EvalError);
  CHECK_THROWS_AS(truth_set(m, P("zzz"), Logic::E), EvalError);
  CHECK_THROWS_AS(truth_set(m, P("O{p | q}"), Logic::Sdl), EvalError);
}

TEST_CASE("direct evaluation agrees with the reference evaluator") {
  gen::Rng rng(5);
  const std::vector<std::string> atoms{"p", "q", "r"};
  for (int i = 0; i < 1500; ++i) {
    const Logic logic = i % 2 ? Logic::E : Logic::Sdl;
    const Model m = gen::model(rng, 1 + i % 5, atoms, logic == Logic::Sdl);
    const Formula f = gen::modal(rng, atoms, 4, logic);
    const std::set<int> expected = oracle::extension(oracle::from(m), f, logic);
    const WorldSet got = truth_set(m, f, logic);
    std::set<int> got_set;
    for (int w = 0; w < m.worlds; ++w) {
      if (contains(got, w)) got_set.insert(w);
    }
    CHECK_MESSAGE(got_set == expected, print(f));
  }
}

TEST_CASE("compiled formulas agree with direct evaluation") {
  gen::Rng rng(6);
  const std::vector<std::string> atoms{"p", "q"};
  std::vector<Formula> fs;
  for (int i = 0; i < 40; ++i) fs.push_back(gen::modal(rng, atoms, 4, Logic::E));
  const CompiledFormulas c(fs, Logic::E, atoms);
  CHECK(c.roots() == fs.size());
  std::vector<WorldSet> out;
  for (int k = 0; k < 100; ++k) {
    const Model m = gen::model(rng, 1 + k % 6, atoms, false);
    std::vector<WorldSet> val{*m.atom("p"), *m.atom("q")};
    c.eval(m.worlds, m.rel.data(), val.data(), out);
    for (std::size_t i = 0; i < fs.size(); ++i) CHECK(out[i] == truth_set(m, fs[i], Logic::E));
  }
}

TEST_CASE("truth is invariant under world permutations") {
  gen::Rng rng(8);
  const std::vector<std::string> atoms{"p", "q"};
  for (int i = 0; i < 300; ++i) {
    const int n = 1 + i % 4;
    const Logic logic = i % 2 ? Logic::E : Logic::Sdl;
    const Model m = gen::model(rng, n, atoms, true);
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) perm[k] = k;
    std::shuffle(perm.begin(), perm.end(), rng);
    const Model pm = permute(m, perm);
    const Formula f = gen::modal(rng, atoms, 3, logic);
    for (int w = 0; w < n; ++w) CHECK(eval(m, w, f, logic) == eval(pm, perm[w], f, logic));
  }
}

TEST_CASE("frame conditions and their witnesses") {
  Model m(3);
  m.relate(0, 1);
  m.relate(1, 2);
  FrameConditions all{true, true, true, true};
  auto checks = check_frame(m, all);
  REQUIRE(checks.size() == 4);
  CHECK(checks[0].condition == "serial");
  CHECK_FALSE(checks[0].holds);
  CHECK(checks[0].witness == std::vector<int>{2});
  CHECK(checks[1].witness == std::vector<int>{0});
  CHECK(checks[2].witness == std::vector<int>{0, 0});
  CHECK(checks[3].witness == std::vector<int>{0, 1, 2});
  CHECK(parse_frame("reflexive,transitive") == FrameConditions{false, true, false, true});
  CHECK(parse_frame("") == FrameConditions{});
  CHECK_THROWS(parse_frame("euclidean"));
  CHECK(to_string(FrameConditions{false, true, true, false}) == "reflexive,total");

  gen::Rng rng(1);
  for (int i = 0; i < 500; ++i) {
    const Model r = gen::model(rng, 1 + i % 4, {}, false);
    for (int k = 0; k < 16; ++k) {
      const FrameConditions fc{(k & 1) != 0, (k & 2) != 0, (k & 4) != 0, (k & 8) != 0};
      CHECK(satisfies(r, fc) == oracle::frame_ok(oracle::from(r), fc));
    }
  }
}

TEST_CASE("model JSON round-trip") {
  Model m = two_worlds();
  m.domain = {"d1", "mary"};
  const std::string text = model_to_json(m);
  CHECK(text.rfind("{\"worlds\":2,\"relation\":[[0,0],[0,1],[1,1]]", 0) == 0);
  CHECK(model_from_json(text) == m);
  CHECK_THROWS(model_from_json("{\"worlds\":2,\"relation\":[[0,5]]}"));
  CHECK_THROWS(model_from_json("not json"));
}

TEST_CASE("E axioms hold in all small preference models") {
  const auto fs = suites::instances(suites::e_axioms(), Logic::E);
  for (const FrameConditions& fc :
       {FrameConditions{}, FrameConditions{false, true, false, false}, FrameConditions{false, false, true, false}}) {
    const suites::Tally t = suites::exhaustive(fs, Logic::E, fc, 2, 7);
    CHECK(t.failures == 0);
    CHECK(t.oracle_failures == 0);
    CHECK(t.oracle_checks > 0);
  }
}

TEST_CASE("KD axioms hold in small serial models, and fail without seriality") {
  const auto fs = suites::instances(suites::kd_axioms(), Logic::Sdl);
  const suites::Tally serial = suites::exhaustive(fs, Logic::Sdl, FrameConditions{true, false, false, false}, 2, 7);
  CHECK(serial.failures == 0);
  CHECK(serial.oracle_failures == 0);
  const suites::Tally any = suites::exhaustive(fs, Logic::Sdl, FrameConditions{}, 2);
  CHECK(any.failures > 0);
}

TEST_CASE("CV fails without transitivity") {
  const auto cv = P("O{r | p} & ~O{~q | p} -> O{r | p & q}");
  CHECK(suites::exhaustive({cv}, Logic::E, FrameConditions{}, 3).failures > 0);
  CHECK(suites::exhaustive({cv}, Logic::E, FrameConditions{false, false, false, true}, 3).failures == 0);
}
