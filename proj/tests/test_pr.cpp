#include <doctest.h>

#include "mmk/pr.hpp"
#include "mmk/sexpr.hpp"

using namespace mmk;
using namespace mmk::pr;

TEST_CASE("native arithmetic basics") {
  CHECK(eval_pr(lib::add(), {Nat(2), Nat(3)}) == 5);
  CHECK(eval_pr(lib::mul(), {Nat(7), Nat(6)}) == 42);
  CHECK(eval_pr(lib::pred(), {Nat(0)}) == 0);
  CHECK(eval_pr(lib::pred(), {Nat(9)}) == 8);
}

TEST_CASE("textbook primitive recursion agrees with native addition") {
  auto f = lib::add_via_prec();
  for (unsigned a = 0; a < 6; ++a)
    for (unsigned b = 0; b < 6; ++b) CHECK(eval_pr(f, {Nat(a), Nat(b)}) == a + b);
}

TEST_CASE("arity is checked") {
  CHECK_THROWS_AS(eval_pr(lib::add(), {Nat(1)}), ArityError);
  CHECK_THROWS_AS(proj(3, 2), ArityError);
  CHECK_THROWS_AS(comp(lib::add(), {proj(1, 1)}), ArityError);
}

TEST_CASE("bounded minimization") {
  // least y <= b with y*y >= x, via ltb(x, S(y*y)) style predicate
  PRPtr sq = comp(native_fn(Native::Mul), {proj(1, 2), proj(1, 2)});
  PRPtr pred = comp(native_fn(Native::Leb), {proj(2, 2), sq});  // x <= y*y
  PRPtr root = bmin(pred);
  CHECK(eval_pr(root, {Nat(10), Nat(9)}) == 3);
  CHECK(eval_pr(root, {Nat(10), Nat(10)}) == 4);
  // exhaustion returns bound + 1
  CHECK(eval_pr(root, {Nat(2), Nat(10)}) == 3);
}

TEST_CASE("cond is lazy") {
  // The untaken branch iterates a primitive recursion a billion times; the
  // test only completes because cond evaluates the taken branch alone.
  PRPtr slow = comp(lib::add_via_prec(), {constant(Nat(1000000000), 1), proj(1, 1)});
  PRPtr ok = cond(constant(0, 1), slow, proj(1, 1));
  CHECK(eval_pr(ok, {Nat(5)}) == 5);
  PRPtr ok2 = cond(constant(1, 1), proj(1, 1), slow);
  CHECK(eval_pr(ok2, {Nat(9)}) == 9);
}

TEST_CASE("course-of-values recursion: fibonacci") {
  using namespace mmk::pr;
  // fib(n) = n for n < 2 else fib(n-1) + fib(n-2)
  PRPtr n = proj(1, 1);
  PRPtr n1 = comp(native_fn(Native::Monus), {n, constant(1, 1)});
  PRPtr n2 = comp(native_fn(Native::Monus), {n, constant(2, 1)});
  PRPtr body = cond(comp(native_fn(Native::Ltb), {n, constant(2, 1)}), n,
                    comp(native_fn(Native::Add), {rec_call(n1), rec_call(n2)}));
  PRPtr fib = cvrec(body);
  CHECK(eval_pr(fib, {Nat(0)}) == 0);
  CHECK(eval_pr(fib, {Nat(1)}) == 1);
  CHECK(eval_pr(fib, {Nat(10)}) == 55);
  // memoized: linear-time even at depth 90
  CHECK(eval_pr(fib, {Nat(90)}) == Nat("2880067194370816120"));
}

TEST_CASE("rec guard: requests at or above the current argument yield 0") {
  PRPtr body = rec_call(proj(1, 1));  // rec(n) at argument n: out of range
  PRPtr f = cvrec(body);
  CHECK(eval_pr(f, {Nat(7)}) == 0);
}

TEST_CASE("rec outside cvrec is rejected") {
  PRPtr bad = rec_call(proj(1, 1));
  CHECK_THROWS(eval_pr(bad, {Nat(1)}));
}

TEST_CASE("evaluation context can be shared") {
  PRPtr n = proj(1, 1);
  PRPtr n1 = comp(native_fn(Native::Monus), {n, constant(1, 1)});
  PRPtr body = cond(comp(native_fn(Native::Eqb), {n, constant(0, 1)}), constant(1, 1),
                    comp(native_fn(Native::Mul), {constant(2, 1), rec_call(n1)}));
  PRPtr p2 = cvrec(body);
  EvalContext ctx;
  CHECK(eval_pr(p2, {Nat(20)}, ctx) == 1048576);
  CHECK(eval_pr(p2, {Nat(10)}, ctx) == 1024);
}

TEST_CASE("s-expression round trip") {
  PRPtr f = lib::fixture_poly();
  Sexpr s = pr_to_sexpr(f);
  PRPtr g = pr_from_sexpr(s);
  CHECK(to_string(pr_to_sexpr(g)) == to_string(s));
  for (unsigned a = 0; a < 4; ++a)
    for (unsigned b = 0; b < 4; ++b)
      CHECK(eval_pr(f, {Nat(a), Nat(b)}) == eval_pr(g, {Nat(a), Nat(b)}));

  PRPtr h = pr_from_sexpr(parse_sexpr("(prec (proj 1 1) (comp (succ) (proj 2 3)))"));
  CHECK(eval_pr(h, {Nat(3), Nat(4)}) == 7);
}

TEST_CASE("fixtures") {
  CHECK(eval_pr(lib::fixture_poly(), {Nat(3), Nat(4)}) == 28);
  CHECK(eval_pr(lib::fixture_sq_pred(), {Nat(4)}) == 15);
  CHECK(eval_pr(lib::fixture_sq_pred(), {Nat(0)}) == 0);
}
