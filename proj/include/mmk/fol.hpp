#pragma once

#include <memory>
#include <set>
#include <stdexcept>
#include <string>

#include "mmk/bignum.hpp"

namespace mmk::fol {

// Terms of the language of arithmetic: 0, S, +, *, variables v0, v1, ...
// Towers of S over 0 are kept in a compressed canonical form: numeral(k) is a
// single Num node for k >= 1, and a Succ node never has Zero or Num below it.
// The smart constructors maintain this invariant; structural equality on
// canonical terms coincides with syntactic equality of the trees they denote.
enum class TermKind { Zero, Succ, Add, Mul, Var, Num };

class Term;
using TermPtr = std::shared_ptr<const Term>;

class Term {
 public:
  TermKind kind;
  unsigned var = 0;  // Var
  Nat num;           // Num, >= 1
  TermPtr a, b;
};

TermPtr mk_zero();
TermPtr mk_succ(TermPtr t);
TermPtr mk_add(TermPtr s, TermPtr t);
TermPtr mk_mul(TermPtr s, TermPtr t);
TermPtr mk_var(unsigned i);
TermPtr numeral(const Nat& n);

enum class FormulaKind { Eq, Lt, Not, And, Or, Implies, ForAll, Exists };

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

class Formula {
 public:
  FormulaKind kind;
  TermPtr s, t;      // Eq, Lt
  FormulaPtr f, g;   // connectives; quantifiers use f
  unsigned var = 0;  // quantifiers
};

FormulaPtr mk_eq(TermPtr s, TermPtr t);
FormulaPtr mk_lt(TermPtr s, TermPtr t);
FormulaPtr mk_not(FormulaPtr f);
FormulaPtr mk_and(FormulaPtr f, FormulaPtr g);
FormulaPtr mk_or(FormulaPtr f, FormulaPtr g);
FormulaPtr mk_implies(FormulaPtr f, FormulaPtr g);
FormulaPtr mk_forall(unsigned v, FormulaPtr f);
FormulaPtr mk_exists(unsigned v, FormulaPtr f);

bool equal(const TermPtr& a, const TermPtr& b);
bool equal(const FormulaPtr& a, const FormulaPtr& b);

std::set<unsigned> free_vars(const TermPtr& t);
std::set<unsigned> free_vars(const FormulaPtr& f);
// Free and bound variable indices together.
std::set<unsigned> all_vars(const FormulaPtr& f);
bool is_sentence(const FormulaPtr& f);

size_t node_count(const TermPtr& t);
size_t node_count(const FormulaPtr& f);

TermPtr substitute(const TermPtr& t, unsigned v, const TermPtr& repl);
// Capture-avoiding substitution: bound variables are renamed to the smallest
// index not occurring (free or bound) in the affected scope when the
// replacement would otherwise be captured.
FormulaPtr substitute(const FormulaPtr& f, unsigned v, const TermPtr& repl);

struct FolSyntaxError : std::runtime_error {
  size_t offset;
  FolSyntaxError(const std::string& msg, size_t off)
      : std::runtime_error(msg + " at offset " + std::to_string(off)), offset(off) {}
};

// Grammar:
//   term:    0 | <decimal> | S(t) | (t + t) | (t * t) | vK
//   formula: t = t | t < t | !f | (f & f) | (f | f) | (f -> f)
//            | forall vK. f | exists vK. f | (f)
// Decimal literals are numerals: S applied that many times to 0.
TermPtr parse_term(const std::string& text);
FormulaPtr parse_formula(const std::string& text);
std::string print(const TermPtr& t);
std::string print(const FormulaPtr& f);

}  // namespace mmk::fol
