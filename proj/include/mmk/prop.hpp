#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mmk::prop {

// Propositional formulas over variables x1, x2, ... The variable set of a
// formula is totally ordered by index. All values are immutable.
enum class Kind { Var, Not, And, Or, Implies, Iff, Top, Bot };

class PropFormula;
using PropPtr = std::shared_ptr<const PropFormula>;

class PropFormula {
 public:
  Kind kind;
  int var = 0;  // Var only, 1-based index of x<var>
  PropPtr lhs, rhs;

  static PropPtr mk_var(int i);
  static PropPtr mk_not(PropPtr a);
  static PropPtr mk_and(PropPtr a, PropPtr b);
  static PropPtr mk_or(PropPtr a, PropPtr b);
  static PropPtr mk_implies(PropPtr a, PropPtr b);
  static PropPtr mk_iff(PropPtr a, PropPtr b);
  static PropPtr top();
  static PropPtr bot();
};

bool equal(const PropPtr& a, const PropPtr& b);

// Total assignment of truth values; the domain is exactly the variable set of
// the formula it is used with.
using Assignment = std::map<int, bool>;

// Conjunction listing each variable exactly once, plain or negated, in index
// order.
struct Combination {
  std::vector<int> vars;
  std::vector<bool> plain;  // plain[i] <-> vars[i] occurs unnegated

  PropPtr to_formula() const;
  std::string to_string() const;
};

enum class Verdict { Tautology, Contradiction, Contingent };

struct Classification {
  Verdict verdict;
  // Contingent only: lexicographically smallest satisfying / falsifying rows.
  std::optional<Assignment> witness_true;
  std::optional<Assignment> witness_false;
};

struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PropSyntaxError : std::runtime_error {
  size_t offset;
  PropSyntaxError(const std::string& msg, size_t off)
      : std::runtime_error(msg + " at offset " + std::to_string(off)), offset(off) {}
};

// Sorted list of variable indices occurring in a.
std::vector<int> variables(const PropPtr& a);

bool evaluate(const PropPtr& a, const Assignment& b);

// Exhaustive truth table; formulas with more than 24 variables are rejected.
Classification classify(const PropPtr& a);

// Canonical disjunctive normal form: the disjunction, over satisfying rows of
// the truth table in lexicographic order, of the full sign-pattern
// conjunctions. A contradiction yields Bot.
PropPtr to_dnf(const PropPtr& a);

Combination combination_of(const Assignment& b);

// Grammar: variables x1..xN, operators ! & | -> <->, parentheses, literals
// 1 (top) and 0 (bot). The printer emits a fully parenthesized form.
PropPtr parse(const std::string& text);
std::string print(const PropPtr& a);

}  // namespace mmk::prop
