#include <doctest.h>

#include <random>

#include "mmk/fol.hpp"

using namespace mmk::fol;
using mmk::Nat;

namespace {

TermPtr random_term(std::mt19937_64& rng, int depth, int max_var) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 5);
  switch (pick(rng)) {
    case 3:
      return mk_succ(random_term(rng, depth - 1, max_var));
    case 4:
      return mk_add(random_term(rng, depth - 1, max_var), random_term(rng, depth - 1, max_var));
    case 5:
      return mk_mul(random_term(rng, depth - 1, max_var), random_term(rng, depth - 1, max_var));
    case 1:
      return mk_var(static_cast<unsigned>(rng() % (max_var + 1)));
    case 2:
      return numeral(Nat(static_cast<unsigned long>(rng() % 12)));
    default:
      return mk_zero();
  }
}

FormulaPtr random_formula(std::mt19937_64& rng, int depth, int max_var) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 7);
  switch (pick(rng)) {
    case 2:
      return mk_not(random_formula(rng, depth - 1, max_var));
    case 3:
      return mk_and(random_formula(rng, depth - 1, max_var), random_formula(rng, depth - 1, max_var));
    case 4:
      return mk_or(random_formula(rng, depth - 1, max_var), random_formula(rng, depth - 1, max_var));
    case 5:
      return mk_implies(random_formula(rng, depth - 1, max_var),
                        random_formula(rng, depth - 1, max_var));
    case 6:
      return mk_forall(static_cast<unsigned>(rng() % (max_var + 1)),
                       random_formula(rng, depth - 1, max_var));
    case 7:
      return mk_exists(static_cast<unsigned>(rng() % (max_var + 1)),
                       random_formula(rng, depth - 1, max_var));
    case 1:
      return mk_lt(random_term(rng, 2, max_var), random_term(rng, 2, max_var));
    default:
      return mk_eq(random_term(rng, 2, max_var), random_term(rng, 2, max_var));
  }
}

}  // namespace

TEST_CASE("parse basic shapes") {
  auto f = parse_formula("0 = 0");
  CHECK(f->kind == FormulaKind::Eq);
  CHECK(f->s->kind == TermKind::Zero);

  auto g = parse_formula("forall v0. !(S(v0) = 0)");
  REQUIRE(g->kind == FormulaKind::ForAll);
  CHECK(g->var == 0);
  REQUIRE(g->f->kind == FormulaKind::Not);
  auto atom = g->f->f;
  REQUIRE(atom->kind == FormulaKind::Eq);
  CHECK(atom->s->kind == TermKind::Succ);
  CHECK(atom->s->a->kind == TermKind::Var);
}

TEST_CASE("syntax errors carry offsets") {
  try {
    parse_formula("(0 =");
    FAIL("expected syntax error");
  } catch (const FolSyntaxError& e) {
    CHECK(e.offset == 4);
  }
  CHECK_THROWS_AS(parse_formula("exists v0 v0 = 0"), FolSyntaxError);
  CHECK_THROWS_AS(parse_term("S(0"), FolSyntaxError);
}

TEST_CASE("numerals are compressed S-towers") {
  CHECK(print(numeral(0)) == "0");
  CHECK(print(numeral(3)) == "3");
  CHECK(equal(numeral(3), parse_term("S(S(S(0)))")));
  CHECK(equal(mk_succ(mk_succ(mk_zero())), numeral(2)));
  // deep towers never build linked chains
  Nat big = Nat(1) << 200;
  CHECK(numeral(big)->num == big);
}

TEST_CASE("substitute term examples") {
  auto f = parse_formula("v0 = 0");
  auto g = substitute(f, 0, parse_term("S(0)"));
  CHECK(print(g) == "1 = 0");
  CHECK(equal(g, parse_formula("S(0) = 0")));
}

TEST_CASE("substitution renames captured binders to the smallest fresh index") {
  auto f = parse_formula("forall v0. v0 = v1");
  auto g = substitute(f, 1, mk_var(0));
  CHECK(print(g) == "forall v2. v2 = v0");
}

TEST_CASE("substitution on closed formulas is identity") {
  auto f = parse_formula("forall v0. v0 = v0");
  auto g = substitute(f, 3, parse_term("S(0)"));
  CHECK(g == f);  // shared structure, not just equal
}

TEST_CASE("substituting a variable by itself is identity") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 300; ++t) {
    auto f = random_formula(rng, 4, 3);
    auto g = substitute(f, 1, mk_var(1));
    CHECK(equal(f, g));
  }
}

TEST_CASE("free_vars after closed substitution") {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 300; ++t) {
    auto f = random_formula(rng, 4, 3);
    auto fv = free_vars(f);
    auto g = substitute(f, 1, numeral(5));
    auto gv = free_vars(g);
    auto expect = fv;
    expect.erase(1);
    CHECK(gv == expect);
  }
}

TEST_CASE("parse of print is the identity on random formulas") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 2000; ++t) {
    auto f = random_formula(rng, 5, 4);
    auto g = parse_formula(print(f));
    CHECK(equal(f, g));
  }
}
