#include <doctest.h>

#include <random>

#include "mmk/arith_pr.hpp"
#include "mmk/coding.hpp"

using namespace mmk;
using namespace mmk::arith;
using namespace mmk::fol;
using mmk::pr::eval_pr;
using mmk::pr::EvalContext;

namespace {

TermPtr random_term(std::mt19937_64& rng, int depth, int max_var) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 5);
  switch (pick(rng)) {
    case 3: return mk_succ(random_term(rng, depth - 1, max_var));
    case 4: return mk_add(random_term(rng, depth - 1, max_var), random_term(rng, depth - 1, max_var));
    case 5: return mk_mul(random_term(rng, depth - 1, max_var), random_term(rng, depth - 1, max_var));
    case 1: return mk_var(static_cast<unsigned>(rng() % (max_var + 1)));
    case 2: return numeral(Nat(static_cast<unsigned long>(rng() % 9)));
    default: return mk_zero();
  }
}

FormulaPtr random_formula(std::mt19937_64& rng, int depth, int max_var) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 7);
  switch (pick(rng)) {
    case 2: return mk_not(random_formula(rng, depth - 1, max_var));
    case 3: return mk_and(random_formula(rng, depth - 1, max_var), random_formula(rng, depth - 1, max_var));
    case 4: return mk_or(random_formula(rng, depth - 1, max_var), random_formula(rng, depth - 1, max_var));
    case 5: return mk_implies(random_formula(rng, depth - 1, max_var), random_formula(rng, depth - 1, max_var));
    case 6: return mk_forall(static_cast<unsigned>(rng() % (max_var + 1)), random_formula(rng, depth - 1, max_var));
    case 7: return mk_exists(static_cast<unsigned>(rng() % (max_var + 1)), random_formula(rng, depth - 1, max_var));
    case 1: return mk_lt(random_term(rng, 2, max_var), random_term(rng, 2, max_var));
    default: return mk_eq(random_term(rng, 2, max_var), random_term(rng, 2, max_var));
  }
}

}  // namespace

TEST_CASE("wf accepts real codes and rejects perturbations") {
  std::mt19937_64 rng(41);
  EvalContext ctx;
  auto wt = wf_term_fn();
  auto wf = wf_formula_fn();
  for (int t = 0; t < 120; ++t) {
    auto f = random_formula(rng, 3, 3);
    Nat code = coding::encode_formula(f);
    CHECK(eval_pr(wf, {code}, ctx) == 1);
    CHECK(eval_pr(wt, {code}, ctx) == 0);  // kind tag mismatch
    CHECK(eval_pr(wf, {code + 1}, ctx) == 0);
    CHECK(eval_pr(wf, {code * 2}, ctx) == 0);
  }
  for (int t = 0; t < 120; ++t) {
    auto tm = random_term(rng, 3, 3);
    Nat code = coding::encode_term(tm);
    CHECK(eval_pr(wt, {code}, ctx) == 1);
    CHECK(eval_pr(wf, {code}, ctx) == 0);
  }
  CHECK(eval_pr(wf, {Nat(0)}, ctx) == 0);
  CHECK(eval_pr(wf, {Nat(1)}, ctx) == 0);
}

TEST_CASE("neg and numeral code builders match the encoder") {
  EvalContext ctx;
  auto f = parse_formula("0 = S(0)");
  CHECK(eval_pr(neg_code_fn(), {coding::encode_formula(f)}, ctx) ==
        coding::encode_formula(mk_not(f)));
  for (unsigned long k : {0ul, 1ul, 2ul, 7ul, 100ul, 12345ul}) {
    CHECK(eval_pr(numeral_code_fn(), {Nat(k)}, ctx) == coding::encode_term(numeral(Nat(k))));
  }
  Nat big = Nat("123456789123456789123456789");
  CHECK(eval_pr(numeral_code_fn(), {big}, ctx) == coding::encode_term(numeral(big)));
}

TEST_CASE("occurrence tests agree with free_vars on plain formulas") {
  std::mt19937_64 rng(42);
  EvalContext ctx;
  auto of = occurs_formula_fn();
  for (int t = 0; t < 150; ++t) {
    auto f = random_formula(rng, 3, 3);
    Nat code = coding::encode_formula(f);
    auto fv = free_vars(f);
    for (unsigned v = 0; v <= 3; ++v) {
      CHECK(eval_pr(of, {code, Nat(v)}, ctx) == (fv.count(v) ? 1 : 0));
    }
  }
}

TEST_CASE("sub_1 matches meta-level substitution: worked example") {
  EvalContext ctx;
  auto f = parse_formula("v1 = 0");
  Nat got = eval_pr(sub_n(1), {coding::encode_formula(f), Nat(2)}, ctx);
  CHECK(got == coding::encode_formula(parse_formula("S(S(0)) = 0")));
}

TEST_CASE("sub_n leaves closed formulas unchanged") {
  EvalContext ctx;
  auto f = parse_formula("forall v1. v1 = 0");
  Nat code = coding::encode_formula(f);
  CHECK(eval_pr(sub_n(1), {code, Nat(9)}, ctx) == code);
  // non-code input passes through
  CHECK(eval_pr(sub_n(1), {Nat(5), Nat(9)}, ctx) == 5);
}

TEST_CASE("sub_n agrees with successive meta-level substitutions") {
  std::mt19937_64 rng(43);
  EvalContext ctx;
  auto s2 = sub_n(2);
  for (int t = 0; t < 100; ++t) {
    auto f = random_formula(rng, 3, 2);
    Nat b1 = Nat(static_cast<unsigned long>(rng() % 50));
    Nat b2 = Nat(static_cast<unsigned long>(rng() % 50));
    auto expect = substitute(substitute(f, 1, numeral(b1)), 2, numeral(b2));
    Nat got = eval_pr(s2, {coding::encode_formula(f), b1, b2}, ctx);
    CHECK(got == coding::encode_formula(expect));
  }
}

TEST_CASE("substitution canonicalizes towers built over substituted numerals") {
  EvalContext ctx;
  // S(v1) with v1 := 2 must code the numeral 3, not S applied to a numeral
  auto f = parse_formula("S(v1) = v1");
  Nat got = eval_pr(sub_n(1), {coding::encode_formula(f), Nat(2)}, ctx);
  CHECK(got == coding::encode_formula(parse_formula("S(S(S(0))) = S(S(0))")));
  auto back = coding::decode_formula(got);
  CHECK(back->s->kind == TermKind::Num);
  CHECK(back->s->num == 3);
}

TEST_CASE("free_for agrees with the meta-level check") {
  EvalContext ctx;
  auto ff = free_for_fn();
  // v0 is not substitutable for v1 under a v0 binder
  auto f = parse_formula("forall v0. v0 = v1");
  Nat fc = coding::encode_formula(f);
  Nat t_v0 = coding::encode_term(mk_var(0));
  Nat t_cl = coding::encode_term(numeral(4));
  CHECK(eval_pr(ff, {fc, Nat(1), t_v0}, ctx) == 0);
  CHECK(eval_pr(ff, {fc, Nat(1), t_cl}, ctx) == 1);
  CHECK(eval_pr(ff, {fc, Nat(0), t_v0}, ctx) == 1);  // v0 is not free at all
}
