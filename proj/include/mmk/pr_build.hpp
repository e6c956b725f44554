#pragma once

#include <vector>

#include "mmk/pr.hpp"

namespace mmk::pr::build {

// Expression DSL for authoring PR definitions: every expression is itself a
// PR function of the scope's arity, composed pointwise. Boolean-valued
// expressions use 0/1.
struct Exp {
  PRPtr fn;
};

inline Exp call(const PRPtr& f, std::vector<Exp> args) {
  std::vector<PRPtr> gs;
  gs.reserve(args.size());
  for (auto& a : args) gs.push_back(std::move(a.fn));
  return {comp(f, std::move(gs))};
}

inline Exp operator+(Exp a, Exp b) { return call(native_fn(Native::Add), {a, b}); }
inline Exp operator*(Exp a, Exp b) { return call(native_fn(Native::Mul), {a, b}); }
inline Exp monus(Exp a, Exp b) { return call(native_fn(Native::Monus), {a, b}); }
inline Exp div_e(Exp a, Exp b) { return call(native_fn(Native::Div), {a, b}); }
inline Exp mod_e(Exp a, Exp b) { return call(native_fn(Native::Mod), {a, b}); }
inline Exp pow2_e(Exp a) { return call(native_fn(Native::Pow2), {a}); }
inline Exp bitlen_e(Exp a) { return call(native_fn(Native::BitLen), {a}); }
inline Exp ltb(Exp a, Exp b) { return call(native_fn(Native::Ltb), {a, b}); }
inline Exp leb(Exp a, Exp b) { return call(native_fn(Native::Leb), {a, b}); }
inline Exp eqb(Exp a, Exp b) { return call(native_fn(Native::Eqb), {a, b}); }

inline Exp ite(Exp c, Exp a, Exp b) { return {cond(c.fn, a.fn, b.fn)}; }
inline Exp rec(Exp t) { return {rec_call(t.fn)}; }

// Strict on 0/1 operands.
inline Exp band(Exp a, Exp b) { return a * b; }
inline Exp bnot(Exp a) { return eqb(a, {comp(zero(), {a.fn})}); }

struct Scope {
  int arity;
  explicit Scope(int k) : arity(k) {}
  Exp arg(int i) const { return {proj(i, arity)}; }
  Exp lit(const Nat& c) const { return {constant(c, arity)}; }
  Exp lit(unsigned long c) const { return {constant(Nat(c), arity)}; }
};

inline Exp bor(const Scope& s, Exp a, Exp b) { return leb(s.lit(1), a + b); }

// Lazy conjunction chain: later conjuncts are only evaluated when the earlier
// ones hold. Use for guards in front of recursive calls.
inline Exp all_of(const Scope& s, std::vector<Exp> xs) {
  Exp acc = s.lit(1);
  for (size_t i = xs.size(); i-- > 0;) acc = ite(xs[i], acc, s.lit(0));
  return acc;
}

}  // namespace mmk::pr::build
