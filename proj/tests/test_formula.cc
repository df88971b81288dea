#include "deon/formula.h"

#include "doctest.h"
#include "generators.h"

using namespace deon;

namespace {

Formula P(const std::string& s, ParseMode mode = ParseMode::E) {
  Signature sig;
  return parse_open(s, sig, mode);
}

Formula a(const char* n) { return Formula::atom(n); }

}  // namespace

TEST_CASE("connective precedence: ~ > & > | > -> > <->") {
  CHECK(P("p & q | r") == Formula::disj(Formula::conj(a("p"), a("q")), a("r")));
  CHECK(P("p | q -> r") == Formula::implies(Formula::disj(a("p"), a("q")), a("r")));
  CHECK(P("p -> q <-> r") == Formula::iff(Formula::implies(a("p"), a("q")), a("r")));
  CHECK(P("~p & q") == Formula::conj(Formula::negation(a("p")), a("q")));
  CHECK(P("p -> q -> r") == Formula::implies(a("p"), Formula::implies(a("q"), a("r"))));
}

TEST_CASE("dyadic obligation splits at the top-level bar") {
  Formula f = P("O{a | b | c}");
  REQUIRE(f.op() == Op::Oblig);
  CHECK(f.lhs() == a("a"));
  CHECK(f.rhs() == Formula::disj(a("b"), a("c")));
  CHECK(P("O{(a | b) | c}").lhs() == Formula::disj(a("a"), a("b")));
}

TEST_CASE("monadic O per parse mode") {
  CHECK(P("O p", ParseMode::E) == Formula::oblig(a("p"), Formula::top()));
  CHECK(P("O p", ParseMode::Sdl) == Formula::oblig_m(a("p")));
  CHECK(P("O p", ParseMode::Any) == Formula::oblig_m(a("p")));
  Signature sig;
  CHECK_THROWS_AS(parse_open("O{p | q}", sig, ParseMode::Sdl), ParseError);
}

TEST_CASE("true and false are the derived constants") {
  CHECK(P("true").is_top());
  CHECK(P("false").is_bottom());
  CHECK(ground_atoms(P("true -> p")) == std::set<std::string>{"p"});
}

TEST_CASE("quantifier scope extends to the right") {
  Formula f = P("forall x. P(x) -> q");
  REQUIRE(f.op() == Op::Forall);
  CHECK(f.lhs().op() == Op::Implies);
  CHECK(is_closed(f));
  CHECK(free_vars(f.lhs()) == std::set<std::string>{"x"});
}

TEST_CASE("parse errors carry locations") {
  Signature sig;
  try {
    parse_open("p &", sig);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(e.column() == 4);
  }
  CHECK_THROWS_AS(parse_open("O{a}", sig), ParseError);
  CHECK_THROWS_AS(parse_open("p @ q", sig), ParseError);
}

TEST_CASE("closed signature rejects undeclared and ill-typed atoms") {
  Signature sig;
  sig.add_predicate("P", 1);
  sig.add_constant("c");
  CHECK_NOTHROW(parse("P(c)", sig));
  CHECK_THROWS(parse("Q(c)", sig));
  CHECK_THROWS(parse("P(c, c)", sig));
  CHECK_THROWS(parse("P(d)", sig));
  ParseOptions opts;
  opts.bound = {"x"};
  CHECK_NOTHROW(parse("P(x)", sig, opts));
}

TEST_CASE("print and parse round-trip on generated formulas") {
  gen::Rng rng(11);
  const std::vector<std::string> atoms{"p", "q", "r"};
  for (int i = 0; i < 500; ++i) {
    const Logic logic = i % 2 ? Logic::Sdl : Logic::E;
    Formula f = gen::modal(rng, atoms, 4, logic);
    Formula g = P(print(f), ParseMode::Any);
    if (logic == Logic::E) g = to_language(g, Logic::E);
    CHECK_MESSAGE(to_language(f, logic) == to_language(g, logic), print(f));
  }
}

TEST_CASE("subformulas are preorder and duplicate-free") {
  Formula f = P("(p & q) | (p & q)");
  auto subs = subformulas(f);
  CHECK(subs.front() == f);
  CHECK(subs.size() == 4);
}

TEST_CASE("grounding expands quantifiers over the domain") {
  Formula f = P("forall x. exists y. Q(x, y)");
  Formula g = ground(f, {"a", "b"});
  CHECK(is_ground(g));
  CHECK(print(g) == "(Q(a, a) | Q(a, b)) & (Q(b, a) | Q(b, b))");
  CHECK(ground_atoms(g).size() == 4);
  CHECK_THROWS(ground(f, {}));
}

TEST_CASE("substitution leaves bound occurrences alone") {
  Signature sig;
  ParseOptions opts;
  opts.open_signature = true;
  opts.bound = {"x"};
  Formula f = parse("P(x) & forall x. P(x)", sig, opts);
  CHECK(free_vars(f) == std::set<std::string>{"x"});
  Formula g = substitute(f, "x", Term::constant("c"));
  CHECK(print(g) == "P(c) & forall x. P(x)");
}

TEST_CASE("language checks") {
  CHECK_THROWS_AS(check_language(P("O{p | q}"), Logic::Sdl), std::invalid_argument);
  CHECK_NOTHROW(check_language(P("O{p | q}"), Logic::E));
  CHECK(to_language(P("O p", ParseMode::Any), Logic::E) == P("O{p | true}"));
  CHECK_THROWS(to_language(P("O{p | q}"), Logic::Sdl));
}

TEST_CASE("schema instantiation") {
  Formula schema = P("O{r | p} -> O{r | p & q}");
  Formula inst = instantiate(schema, {{"p", a("a")}, {"q", Formula::negation(a("b"))}, {"r", a("c")}});
  CHECK(print(inst) == "O{c | a} -> O{c | a & ~b}");
}
