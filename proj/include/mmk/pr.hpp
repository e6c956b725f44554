#pragma once

#include <memory>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "mmk/bignum.hpp"
#include "mmk/fol.hpp"
#include "mmk/sexpr.hpp"

namespace mmk::pr {

// Primitive-recursive function definitions with executable semantics and a
// compiler to Sigma_1 graph formulas.
//
// Node kinds beyond the classic basis (zero, succ, proj, comp, prec, bmin):
//   const   constant functions (numerals are primitive recursive)
//   native  a fixed catalog of classic arithmetic functions (add, mul, monus,
//           div, mod, pow2, bitlen, comparison predicates) evaluated directly
//           on bignums; each carries a hand-written graph formula
//   cond    definition by cases on a 0/1 guard, evaluated lazily
//   cvrec   course-of-values recursion on the first argument: inside the body,
//           rec(t) denotes the function's own value at t (same remaining
//           arguments) when t < the current first argument, and 0 otherwise
//
// cvrec is evaluated demand-driven with a memo table per (definition,
// remaining-argument) activation, so structural recursion over Goedel codes
// costs time proportional to the syntax walked rather than the code value.
enum class NodeKind { Zero, Succ, Proj, Comp, Prec, Bmin, Const, Native, Cvrec, Rec, Cond };

enum class Native { Add, Mul, Monus, Div, Mod, Pow2, BitLen, Ltb, Leb, Eqb };

class PRFunction;
using PRPtr = std::shared_ptr<const PRFunction>;

class PRFunction {
 public:
  NodeKind kind;
  int arity = 0;
  int i = 0, k = 0;        // Proj
  Nat value;               // Const
  Native native{};         // Native
  PRPtr f;                 // Comp target / Prec base / Bmin body / Cvrec body / Rec arg / Cond guard
  PRPtr g;                 // Prec step
  std::vector<PRPtr> gs;   // Comp arguments / Cond branches (then, else)
  bool free_rec = false;   // true when a rec node occurs outside any cvrec
};

struct ArityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

PRPtr zero();  // the unary constant-0 function
PRPtr succ();
PRPtr proj(int i, int k);
PRPtr comp(PRPtr f, std::vector<PRPtr> gs);
PRPtr prec(PRPtr base, PRPtr step);
PRPtr bmin(PRPtr f);
PRPtr constant(const Nat& c, int arity);
PRPtr native_fn(Native n);
PRPtr cvrec(PRPtr body);
PRPtr rec_call(PRPtr t);
PRPtr cond(PRPtr c, PRPtr a, PRPtr b);

int native_arity(Native n);
const char* native_name(Native n);

// Memoization context. Reusable across eval_pr calls on the same definitions;
// a fresh one per call gives identical results.
class EvalContext {
 public:
  struct ActKey {
    const PRFunction* node;
    std::vector<Nat> rest;
    bool operator==(const ActKey& o) const { return node == o.node && rest == o.rest; }
  };
  struct ActKeyHash {
    size_t operator()(const ActKey& k) const {
      return std::hash<const void*>()(k.node) ^ NatVecHash()(k.rest);
    }
  };
  using Memo = std::unordered_map<Nat, Nat, NatHash>;
  std::unordered_map<ActKey, Memo, ActKeyHash> activations;
};

Nat eval_pr(const PRPtr& f, const std::vector<Nat>& args);
Nat eval_pr(const PRPtr& f, const std::vector<Nat>& args, EvalContext& ctx);

// Graph compilation: a Sigma_1 formula with designated free variables
// v1..vk (inputs) and v0 (output) such that Graph_f(a..., b) holds in the
// standard model iff f(a...) = b. Primitive recursion and course-of-values
// recursion are compiled with Goedel's beta function over an existentially
// quantified value chain.
fol::FormulaPtr compile_pr(const PRPtr& f);
// Slot-directed variant: inputs at the given variable indices, output at
// `out`, internal variables allocated from `fresh` (updated).
fol::FormulaPtr compile_graph(const PRPtr& f, const std::vector<unsigned>& ins, unsigned out,
                              unsigned& fresh);

// S-expression serialization:
//   (zero) (succ) (proj i k) (comp f g1..gk) (prec base step) (bmin f)
//   (const c k) (native name) (cvrec body) (rec t) (cond c a b)
PRPtr pr_from_sexpr(const Sexpr& s);
Sexpr pr_to_sexpr(const PRPtr& f);

namespace lib {
PRPtr add();    // native add, arity 2
PRPtr mul();
PRPtr pred();   // x monus 1
PRPtr add_via_prec();  // textbook primitive-recursive addition
PRPtr fixture_poly();  // (x + y) * (x + 1)
PRPtr fixture_sq_pred();  // pred(x * x)
}  // namespace lib

}  // namespace mmk::pr
