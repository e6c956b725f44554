#pragma once

#include <map>
#include <stdexcept>

#include "mmk/bignum.hpp"
#include "mmk/fol.hpp"

namespace mmk::pr {

// Three-valued verdict of bounded evaluation over the standard model.
// UnknownAtBound only arises from quantifier bound exhaustion.
enum class TriBool { False = 0, True = 1, Unknown = 2 };

const char* to_string(TriBool t);

inline TriBool tb_not(TriBool a) {
  if (a == TriBool::Unknown) return TriBool::Unknown;
  return a == TriBool::True ? TriBool::False : TriBool::True;
}
inline TriBool tb_and(TriBool a, TriBool b) {
  if (a == TriBool::False || b == TriBool::False) return TriBool::False;
  if (a == TriBool::Unknown || b == TriBool::Unknown) return TriBool::Unknown;
  return TriBool::True;
}
inline TriBool tb_or(TriBool a, TriBool b) {
  if (a == TriBool::True || b == TriBool::True) return TriBool::True;
  if (a == TriBool::Unknown || b == TriBool::Unknown) return TriBool::Unknown;
  return TriBool::False;
}

using Env = std::map<unsigned, Nat>;

struct UnboundVariable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Nat term_value(const fol::TermPtr& t, const Env& env);

// Bounded three-valued evaluation. Connectives are Kleene; bounded-quantifier
// patterns (forall v. v < t -> ..., exists v. (v < t & ...), and their <=
// variants) are evaluated exactly; other quantifiers search witnesses
// 0..bound. Conjunctive existential matrices are additionally resolved by
// constraint propagation over the graph shapes emitted by compile_pr, and
// beta-chain templates are evaluated by computing the course-of-values chain
// they pin down (the beta lemma guarantees witnesses for every finite chain),
// so compiled graphs evaluate to exact True/False verdicts.
TriBool eval_bounded(const fol::FormulaPtr& f, const Env& env, const Nat& bound);

}  // namespace mmk::pr
