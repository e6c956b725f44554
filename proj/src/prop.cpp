#include "mmk/prop.hpp"

#include <algorithm>
#include <set>

namespace mmk::prop {

namespace {
PropPtr node(Kind k, int var, PropPtr l, PropPtr r) {
  auto p = std::make_shared<PropFormula>();
  p->kind = k;
  p->var = var;
  p->lhs = std::move(l);
  p->rhs = std::move(r);
  return p;
}
}  // namespace

PropPtr PropFormula::mk_var(int i) {
  if (i < 1) throw std::invalid_argument("variable index must be >= 1");
  return node(Kind::Var, i, nullptr, nullptr);
}
PropPtr PropFormula::mk_not(PropPtr a) { return node(Kind::Not, 0, std::move(a), nullptr); }
PropPtr PropFormula::mk_and(PropPtr a, PropPtr b) {
  return node(Kind::And, 0, std::move(a), std::move(b));
}
PropPtr PropFormula::mk_or(PropPtr a, PropPtr b) {
  return node(Kind::Or, 0, std::move(a), std::move(b));
}
PropPtr PropFormula::mk_implies(PropPtr a, PropPtr b) {
  return node(Kind::Implies, 0, std::move(a), std::move(b));
}
PropPtr PropFormula::mk_iff(PropPtr a, PropPtr b) {
  return node(Kind::Iff, 0, std::move(a), std::move(b));
}
PropPtr PropFormula::top() { return node(Kind::Top, 0, nullptr, nullptr); }
PropPtr PropFormula::bot() { return node(Kind::Bot, 0, nullptr, nullptr); }

bool equal(const PropPtr& a, const PropPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->var != b->var) return false;
  return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
}

std::vector<int> variables(const PropPtr& a) {
  std::set<int> vs;
  std::vector<const PropFormula*> stack{a.get()};
  while (!stack.empty()) {
    const PropFormula* f = stack.back();
    stack.pop_back();
    if (!f) continue;
    if (f->kind == Kind::Var) vs.insert(f->var);
    stack.push_back(f->lhs.get());
    stack.push_back(f->rhs.get());
  }
  return {vs.begin(), vs.end()};
}

bool evaluate(const PropPtr& a, const Assignment& b) {
  switch (a->kind) {
    case Kind::Var: {
      auto it = b.find(a->var);
      if (it == b.end()) throw std::runtime_error("assignment does not cover x" + std::to_string(a->var));
      return it->second;
    }
    case Kind::Not:
      return !evaluate(a->lhs, b);
    case Kind::And:
      return evaluate(a->lhs, b) && evaluate(a->rhs, b);
    case Kind::Or:
      return evaluate(a->lhs, b) || evaluate(a->rhs, b);
    case Kind::Implies:
      return !evaluate(a->lhs, b) || evaluate(a->rhs, b);
    case Kind::Iff:
      return evaluate(a->lhs, b) == evaluate(a->rhs, b);
    case Kind::Top:
      return true;
    case Kind::Bot:
      return false;
  }
  throw std::logic_error("unreachable");
}

namespace {

// Row r in lexicographic order over (b(x_{v1}), ..., b(x_{vn})): the first
// variable is the most significant bit.
Assignment row_assignment(const std::vector<int>& vars, unsigned long r) {
  Assignment b;
  size_t n = vars.size();
  for (size_t i = 0; i < n; ++i) b[vars[i]] = (r >> (n - 1 - i)) & 1;
  return b;
}

}  // namespace

Classification classify(const PropPtr& a) {
  auto vars = variables(a);
  if (vars.size() > 24) throw ResourceError("classify: more than 24 variables");
  unsigned long rows = 1ul << vars.size();
  std::optional<unsigned long> first_true, first_false;
  for (unsigned long r = 0; r < rows; ++r) {
    bool v = evaluate(a, row_assignment(vars, r));
    if (v && !first_true) first_true = r;
    if (!v && !first_false) first_false = r;
    if (first_true && first_false) break;
  }
  if (!first_false) return {Verdict::Tautology, std::nullopt, std::nullopt};
  if (!first_true) return {Verdict::Contradiction, std::nullopt, std::nullopt};
  return {Verdict::Contingent, row_assignment(vars, *first_true), row_assignment(vars, *first_false)};
}

PropPtr Combination::to_formula() const {
  PropPtr acc;
  for (size_t i = 0; i < vars.size(); ++i) {
    PropPtr lit = PropFormula::mk_var(vars[i]);
    if (!plain[i]) lit = PropFormula::mk_not(lit);
    acc = acc ? PropFormula::mk_and(acc, lit) : lit;
  }
  return acc ? acc : PropFormula::top();
}

std::string Combination::to_string() const {
  if (vars.empty()) return "1";
  std::string out;
  for (size_t i = 0; i < vars.size(); ++i) {
    if (i) out += " & ";
    if (!plain[i]) out += '!';
    out += 'x' + std::to_string(vars[i]);
  }
  return out;
}

PropPtr to_dnf(const PropPtr& a) {
  auto vars = variables(a);
  if (vars.size() > 24) throw ResourceError("to_dnf: more than 24 variables");
  unsigned long rows = 1ul << vars.size();
  PropPtr acc;
  for (unsigned long r = 0; r < rows; ++r) {
    Assignment b = row_assignment(vars, r);
    if (!evaluate(a, b)) continue;
    PropPtr conj = combination_of(b).to_formula();
    acc = acc ? PropFormula::mk_or(acc, conj) : conj;
  }
  return acc ? acc : PropFormula::bot();
}

Combination combination_of(const Assignment& b) {
  Combination c;
  for (const auto& [v, val] : b) {
    c.vars.push_back(v);
    c.plain.push_back(val);
  }
  return c;
}

// ---------------------------------------------------------------------------
// Parsing / printing

namespace {

struct Parser {
  const std::string& s;
  size_t pos = 0;

  void skip_space() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }

  bool eat(const std::string& tok) {
    skip_space();
    if (s.compare(pos, tok.size(), tok) == 0) {
      pos += tok.size();
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& msg) { throw PropSyntaxError(msg, pos); }

  // iff is the loosest binder; implication associates to the right.
  PropPtr parse_iff() {
    PropPtr a = parse_implies();
    while (true) {
      skip_space();
      if (eat("<->")) {
        a = PropFormula::mk_iff(a, parse_implies());
      } else {
        return a;
      }
    }
  }

  PropPtr parse_implies() {
    PropPtr a = parse_or();
    skip_space();
    if (s.compare(pos, 3, "<->") == 0) return a;  // handled by caller
    if (eat("->")) return PropFormula::mk_implies(a, parse_implies());
    return a;
  }

  PropPtr parse_or() {
    PropPtr a = parse_and();
    while (true) {
      skip_space();
      if (pos < s.size() && s[pos] == '|') {
        ++pos;
        a = PropFormula::mk_or(a, parse_and());
      } else {
        return a;
      }
    }
  }

  PropPtr parse_and() {
    PropPtr a = parse_unary();
    while (true) {
      skip_space();
      if (pos < s.size() && s[pos] == '&') {
        ++pos;
        a = PropFormula::mk_and(a, parse_unary());
      } else {
        return a;
      }
    }
  }

  PropPtr parse_unary() {
    skip_space();
    if (pos >= s.size()) fail("unexpected end of input");
    char c = s[pos];
    if (c == '!') {
      ++pos;
      return PropFormula::mk_not(parse_unary());
    }
    if (c == '(') {
      ++pos;
      PropPtr a = parse_iff();
      skip_space();
      if (pos >= s.size() || s[pos] != ')') fail("expected ')'");
      ++pos;
      return a;
    }
    if (c == '1') {
      ++pos;
      return PropFormula::top();
    }
    if (c == '0') {
      ++pos;
      return PropFormula::bot();
    }
    if (c == 'x') {
      size_t start = ++pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      if (pos == start) fail("expected variable index after 'x'");
      int idx = std::stoi(s.substr(start, pos - start));
      if (idx < 1) fail("variable index must be >= 1");
      return PropFormula::mk_var(idx);
    }
    fail("unexpected character");
  }
};

}  // namespace

PropPtr parse(const std::string& text) {
  Parser p{text};
  PropPtr a = p.parse_iff();
  p.skip_space();
  if (p.pos != text.size()) p.fail("trailing input");
  return a;
}

std::string print(const PropPtr& a) {
  switch (a->kind) {
    case Kind::Var:
      return "x" + std::to_string(a->var);
    case Kind::Not:
      return "!" + print(a->lhs);
    case Kind::And:
      return "(" + print(a->lhs) + " & " + print(a->rhs) + ")";
    case Kind::Or:
      return "(" + print(a->lhs) + " | " + print(a->rhs) + ")";
    case Kind::Implies:
      return "(" + print(a->lhs) + " -> " + print(a->rhs) + ")";
    case Kind::Iff:
      return "(" + print(a->lhs) + " <-> " + print(a->rhs) + ")";
    case Kind::Top:
      return "1";
    case Kind::Bot:
      return "0";
  }
  throw std::logic_error("unreachable");
}

}  // namespace mmk::prop
