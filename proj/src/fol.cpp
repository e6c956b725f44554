#include "mmk/fol.hpp"

#include <algorithm>

namespace mmk::fol {

TermPtr mk_zero() {
  static TermPtr z = [] {
    auto t = std::make_shared<Term>();
    t->kind = TermKind::Zero;
    return t;
  }();
  return z;
}

TermPtr numeral(const Nat& n) {
  if (n == 0) return mk_zero();
  auto t = std::make_shared<Term>();
  t->kind = TermKind::Num;
  t->num = n;
  return t;
}

TermPtr mk_succ(TermPtr t) {
  if (t->kind == TermKind::Zero) return numeral(1);
  if (t->kind == TermKind::Num) return numeral(t->num + 1);
  auto r = std::make_shared<Term>();
  r->kind = TermKind::Succ;
  r->a = std::move(t);
  return r;
}

TermPtr mk_add(TermPtr s, TermPtr t) {
  auto r = std::make_shared<Term>();
  r->kind = TermKind::Add;
  r->a = std::move(s);
  r->b = std::move(t);
  return r;
}

TermPtr mk_mul(TermPtr s, TermPtr t) {
  auto r = std::make_shared<Term>();
  r->kind = TermKind::Mul;
  r->a = std::move(s);
  r->b = std::move(t);
  return r;
}

TermPtr mk_var(unsigned i) {
  auto r = std::make_shared<Term>();
  r->kind = TermKind::Var;
  r->var = i;
  return r;
}

namespace {
std::shared_ptr<Formula> fnode(FormulaKind k) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  return f;
}

FormulaPtr binary(FormulaKind k, FormulaPtr a, FormulaPtr b) {
  auto f = fnode(k);
  f->f = std::move(a);
  f->g = std::move(b);
  return f;
}
}  // namespace

FormulaPtr mk_eq(TermPtr s, TermPtr t) {
  auto f = fnode(FormulaKind::Eq);
  f->s = std::move(s);
  f->t = std::move(t);
  return f;
}
FormulaPtr mk_lt(TermPtr s, TermPtr t) {
  auto f = fnode(FormulaKind::Lt);
  f->s = std::move(s);
  f->t = std::move(t);
  return f;
}
FormulaPtr mk_not(FormulaPtr g) {
  auto f = fnode(FormulaKind::Not);
  f->f = std::move(g);
  return f;
}
FormulaPtr mk_and(FormulaPtr f, FormulaPtr g) { return binary(FormulaKind::And, std::move(f), std::move(g)); }
FormulaPtr mk_or(FormulaPtr f, FormulaPtr g) { return binary(FormulaKind::Or, std::move(f), std::move(g)); }
FormulaPtr mk_implies(FormulaPtr f, FormulaPtr g) {
  return binary(FormulaKind::Implies, std::move(f), std::move(g));
}
FormulaPtr mk_forall(unsigned v, FormulaPtr g) {
  auto f = fnode(FormulaKind::ForAll);
  f->var = v;
  f->f = std::move(g);
  return f;
}
FormulaPtr mk_exists(unsigned v, FormulaPtr g) {
  auto f = fnode(FormulaKind::Exists);
  f->var = v;
  f->f = std::move(g);
  return f;
}

bool equal(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case TermKind::Zero:
      return true;
    case TermKind::Var:
      return a->var == b->var;
    case TermKind::Num:
      return a->num == b->num;
    case TermKind::Succ:
      return equal(a->a, b->a);
    case TermKind::Add:
    case TermKind::Mul:
      return equal(a->a, b->a) && equal(a->b, b->b);
  }
  return false;
}

bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->var != b->var) return false;
  switch (a->kind) {
    case FormulaKind::Eq:
    case FormulaKind::Lt:
      return equal(a->s, b->s) && equal(a->t, b->t);
    case FormulaKind::Not:
    case FormulaKind::ForAll:
    case FormulaKind::Exists:
      return equal(a->f, b->f);
    default:
      return equal(a->f, b->f) && equal(a->g, b->g);
  }
}

namespace {
void collect_term_vars(const TermPtr& t, std::set<unsigned>& out) {
  switch (t->kind) {
    case TermKind::Var:
      out.insert(t->var);
      return;
    case TermKind::Succ:
      collect_term_vars(t->a, out);
      return;
    case TermKind::Add:
    case TermKind::Mul:
      collect_term_vars(t->a, out);
      collect_term_vars(t->b, out);
      return;
    default:
      return;
  }
}

void collect_free(const FormulaPtr& f, std::set<unsigned>& bound, std::set<unsigned>& out) {
  switch (f->kind) {
    case FormulaKind::Eq:
    case FormulaKind::Lt: {
      std::set<unsigned> tv;
      collect_term_vars(f->s, tv);
      collect_term_vars(f->t, tv);
      for (unsigned v : tv)
        if (!bound.count(v)) out.insert(v);
      return;
    }
    case FormulaKind::Not:
      collect_free(f->f, bound, out);
      return;
    case FormulaKind::ForAll:
    case FormulaKind::Exists: {
      bool fresh = bound.insert(f->var).second;
      collect_free(f->f, bound, out);
      if (fresh) bound.erase(f->var);
      return;
    }
    default:
      collect_free(f->f, bound, out);
      collect_free(f->g, bound, out);
      return;
  }
}

void collect_all(const FormulaPtr& f, std::set<unsigned>& out) {
  switch (f->kind) {
    case FormulaKind::Eq:
    case FormulaKind::Lt:
      collect_term_vars(f->s, out);
      collect_term_vars(f->t, out);
      return;
    case FormulaKind::Not:
      collect_all(f->f, out);
      return;
    case FormulaKind::ForAll:
    case FormulaKind::Exists:
      out.insert(f->var);
      collect_all(f->f, out);
      return;
    default:
      collect_all(f->f, out);
      collect_all(f->g, out);
      return;
  }
}
}  // namespace

std::set<unsigned> free_vars(const TermPtr& t) {
  std::set<unsigned> out;
  collect_term_vars(t, out);
  return out;
}

std::set<unsigned> free_vars(const FormulaPtr& f) {
  std::set<unsigned> bound, out;
  collect_free(f, bound, out);
  return out;
}

std::set<unsigned> all_vars(const FormulaPtr& f) {
  std::set<unsigned> out;
  collect_all(f, out);
  return out;
}

bool is_sentence(const FormulaPtr& f) { return free_vars(f).empty(); }

size_t node_count(const TermPtr& t) {
  switch (t->kind) {
    case TermKind::Zero:
    case TermKind::Var:
      return 1;
    case TermKind::Num:
      return 1;
    case TermKind::Succ:
      return 1 + node_count(t->a);
    default:
      return 1 + node_count(t->a) + node_count(t->b);
  }
}

size_t node_count(const FormulaPtr& f) {
  switch (f->kind) {
    case FormulaKind::Eq:
    case FormulaKind::Lt:
      return 1 + node_count(f->s) + node_count(f->t);
    case FormulaKind::Not:
    case FormulaKind::ForAll:
    case FormulaKind::Exists:
      return 1 + node_count(f->f);
    default:
      return 1 + node_count(f->f) + node_count(f->g);
  }
}

TermPtr substitute(const TermPtr& t, unsigned v, const TermPtr& repl) {
  switch (t->kind) {
    case TermKind::Var:
      return t->var == v ? repl : t;
    case TermKind::Succ: {
      TermPtr a = substitute(t->a, v, repl);
      return a == t->a ? t : mk_succ(a);
    }
    case TermKind::Add:
    case TermKind::Mul: {
      TermPtr a = substitute(t->a, v, repl);
      TermPtr b = substitute(t->b, v, repl);
      if (a == t->a && b == t->b) return t;
      return t->kind == TermKind::Add ? mk_add(a, b) : mk_mul(a, b);
    }
    default:
      return t;
  }
}

FormulaPtr substitute(const FormulaPtr& f, unsigned v, const TermPtr& repl) {
  switch (f->kind) {
    case FormulaKind::Eq:
    case FormulaKind::Lt: {
      TermPtr s = substitute(f->s, v, repl);
      TermPtr t = substitute(f->t, v, repl);
      if (s == f->s && t == f->t) return f;
      return f->kind == FormulaKind::Eq ? mk_eq(s, t) : mk_lt(s, t);
    }
    case FormulaKind::Not: {
      FormulaPtr g = substitute(f->f, v, repl);
      return g == f->f ? f : mk_not(g);
    }
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies: {
      FormulaPtr a = substitute(f->f, v, repl);
      FormulaPtr b = substitute(f->g, v, repl);
      if (a == f->f && b == f->g) return f;
      return binary(f->kind, a, b);
    }
    case FormulaKind::ForAll:
    case FormulaKind::Exists: {
      if (f->var == v) return f;  // bound occurrence shadows
      auto body_free = free_vars(f->f);
      if (!body_free.count(v)) return f;  // nothing to substitute below
      auto repl_free = free_vars(repl);
      unsigned binder = f->var;
      FormulaPtr body = f->f;
      if (repl_free.count(binder)) {
        // Capture: rename the binder to the smallest index not occurring in
        // the affected scope (the body, the replacement, or v itself).
        std::set<unsigned> used = all_vars(body);
        used.insert(repl_free.begin(), repl_free.end());
        used.insert(v);
        unsigned fresh = 0;
        while (used.count(fresh)) ++fresh;
        body = substitute(body, binder, mk_var(fresh));
        binder = fresh;
      }
      FormulaPtr sub = substitute(body, v, repl);
      return f->kind == FormulaKind::ForAll ? mk_forall(binder, sub) : mk_exists(binder, sub);
    }
  }
  throw std::logic_error("unreachable");
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

  [[noreturn]] void fail(const std::string& msg) { throw FolSyntaxError(msg, pos); }

  bool eat(char c) {
    skip_space();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  void expect(char c, const char* what) {
    if (!eat(c)) fail(std::string("expected ") + what);
  }

  bool eat_word(const std::string& w) {
    skip_space();
    if (s.compare(pos, w.size(), w) == 0) {
      size_t end = pos + w.size();
      if (end < s.size() && (std::isalnum(static_cast<unsigned char>(s[end])))) return false;
      pos = end;
      return true;
    }
    return false;
  }

  unsigned parse_var_index() {
    skip_space();
    if (pos >= s.size() || s[pos] != 'v') fail("expected variable");
    ++pos;
    size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start) fail("expected variable index after 'v'");
    return static_cast<unsigned>(std::stoul(s.substr(start, pos - start)));
  }

  TermPtr term() {
    skip_space();
    if (pos >= s.size()) fail("unexpected end of input in term");
    char c = s[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      return numeral(Nat(s.substr(start, pos - start)));
    }
    if (c == 'S') {
      ++pos;
      expect('(', "'(' after S");
      TermPtr t = term();
      expect(')', "')'");
      return mk_succ(t);
    }
    if (c == 'v') return mk_var(parse_var_index());
    if (c == '(') {
      ++pos;
      TermPtr a = term();
      skip_space();
      if (eat('+')) {
        TermPtr b = term();
        expect(')', "')'");
        return mk_add(a, b);
      }
      if (eat('*')) {
        TermPtr b = term();
        expect(')', "')'");
        return mk_mul(a, b);
      }
      fail("expected '+' or '*'");
    }
    fail("unexpected character in term");
  }

  FormulaPtr atom_from(TermPtr lhs) {
    skip_space();
    if (eat('=')) return mk_eq(std::move(lhs), term());
    if (eat('<')) return mk_lt(std::move(lhs), term());
    fail("expected '=' or '<'");
  }

  FormulaPtr formula() {
    skip_space();
    if (pos >= s.size()) fail("unexpected end of input in formula");
    char c = s[pos];
    if (c == '!') {
      ++pos;
      return mk_not(formula());
    }
    if (eat_word("forall")) {
      unsigned v = parse_var_index();
      expect('.', "'.' after quantified variable");
      return mk_forall(v, formula());
    }
    if (eat_word("exists")) {
      unsigned v = parse_var_index();
      expect('.', "'.' after quantified variable");
      return mk_exists(v, formula());
    }
    if (c == '(') {
      // Either a parenthesized term starting an atom, or a formula.
      size_t save = pos;
      try {
        TermPtr t = term();
        return atom_from(std::move(t));
      } catch (const FolSyntaxError&) {
        pos = save;
      }
      ++pos;  // consume '('
      FormulaPtr a = formula();
      skip_space();
      if (eat(')')) return a;
      if (eat('&')) {
        FormulaPtr b = formula();
        expect(')', "')'");
        return mk_and(a, b);
      }
      if (eat('|')) {
        FormulaPtr b = formula();
        expect(')', "')'");
        return mk_or(a, b);
      }
      if (s.compare(pos, 2, "->") == 0) {
        pos += 2;
        FormulaPtr b = formula();
        expect(')', "')'");
        return mk_implies(a, b);
      }
      fail("expected '&', '|', '->' or ')'");
    }
    return atom_from(term());
  }
};

std::string print_term(const TermPtr& t) {
  switch (t->kind) {
    case TermKind::Zero:
      return "0";
    case TermKind::Num:
      return t->num.get_str();
    case TermKind::Var:
      return "v" + std::to_string(t->var);
    case TermKind::Succ:
      return "S(" + print_term(t->a) + ")";
    case TermKind::Add:
      return "(" + print_term(t->a) + " + " + print_term(t->b) + ")";
    case TermKind::Mul:
      return "(" + print_term(t->a) + " * " + print_term(t->b) + ")";
  }
  throw std::logic_error("unreachable");
}

}  // namespace

TermPtr parse_term(const std::string& text) {
  Parser p{text};
  TermPtr t = p.term();
  p.skip_space();
  if (p.pos != text.size()) p.fail("trailing input");
  return t;
}

FormulaPtr parse_formula(const std::string& text) {
  Parser p{text};
  FormulaPtr f = p.formula();
  p.skip_space();
  if (p.pos != text.size()) p.fail("trailing input");
  return f;
}

std::string print(const TermPtr& t) { return print_term(t); }

std::string print(const FormulaPtr& f) {
  switch (f->kind) {
    case FormulaKind::Eq:
      return print_term(f->s) + " = " + print_term(f->t);
    case FormulaKind::Lt:
      return print_term(f->s) + " < " + print_term(f->t);
    case FormulaKind::Not:
      return "!(" + print(f->f) + ")";
    case FormulaKind::And:
      return "(" + print(f->f) + " & " + print(f->g) + ")";
    case FormulaKind::Or:
      return "(" + print(f->f) + " | " + print(f->g) + ")";
    case FormulaKind::Implies:
      return "(" + print(f->f) + " -> " + print(f->g) + ")";
    case FormulaKind::ForAll:
      return "forall v" + std::to_string(f->var) + ". " + print(f->f);
    case FormulaKind::Exists:
      return "exists v" + std::to_string(f->var) + ". " + print(f->f);
  }
  throw std::logic_error("unreachable");
}

}  // namespace mmk::fol
