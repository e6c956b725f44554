#include "mmk/eval.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <vector>

namespace mmk::pr {

using fol::Formula;
using fol::FormulaKind;
using fol::FormulaPtr;
using fol::Term;
using fol::TermKind;
using fol::TermPtr;

const char* to_string(TriBool t) {
  switch (t) {
    case TriBool::False: return "false";
    case TriBool::True: return "true";
    case TriBool::Unknown: return "unknown-at-bound";
  }
  return "?";
}

namespace {

bool term_has_var(const TermPtr& t, unsigned v) {
  switch (t->kind) {
    case TermKind::Var: return t->var == v;
    case TermKind::Succ: return term_has_var(t->a, v);
    case TermKind::Add:
    case TermKind::Mul: return term_has_var(t->a, v) || term_has_var(t->b, v);
    default: return false;
  }
}

size_t count_free_occurrences(const FormulaPtr& f, unsigned v);

size_t count_term_occurrences(const TermPtr& t, unsigned v) {
  switch (t->kind) {
    case TermKind::Var: return t->var == v ? 1 : 0;
    case TermKind::Succ: return count_term_occurrences(t->a, v);
    case TermKind::Add:
    case TermKind::Mul:
      return count_term_occurrences(t->a, v) + count_term_occurrences(t->b, v);
    default: return 0;
  }
}

size_t count_free_occurrences(const FormulaPtr& f, unsigned v) {
  switch (f->kind) {
    case FormulaKind::Eq:
    case FormulaKind::Lt:
      return count_term_occurrences(f->s, v) + count_term_occurrences(f->t, v);
    case FormulaKind::Not:
      return count_free_occurrences(f->f, v);
    case FormulaKind::ForAll:
    case FormulaKind::Exists:
      if (f->var == v) return 0;
      return count_free_occurrences(f->f, v);
    default:
      return count_free_occurrences(f->f, v) + count_free_occurrences(f->g, v);
  }
}

// Environment with an undo log so quantifier loops and solver branches can
// bind and roll back without copying.
struct ScopedEnv {
  Env map;
  std::vector<unsigned> log;

  explicit ScopedEnv(const Env& base) : map(base) {}

  size_t mark() const { return log.size(); }

  bool set(unsigned v, const Nat& val) {
    auto [it, fresh] = map.emplace(v, val);
    if (!fresh) return false;  // collision: caller treats as unsolvable
    log.push_back(v);
    return true;
  }

  void assign(unsigned v, const Nat& val) { map[v] = val; }  // loop variable reuse

  void rollback(size_t m) {
    while (log.size() > m) {
      map.erase(log.back());
      log.pop_back();
    }
  }

  const Nat* find(unsigned v) const {
    auto it = map.find(v);
    return it == map.end() ? nullptr : &it->second;
  }
};

std::optional<Nat> try_term_value(const TermPtr& t, const ScopedEnv& env) {
  switch (t->kind) {
    case TermKind::Zero: return Nat(0);
    case TermKind::Num: return t->num;
    case TermKind::Var: {
      const Nat* v = env.find(t->var);
      if (!v) return std::nullopt;
      return *v;
    }
    case TermKind::Succ: {
      auto a = try_term_value(t->a, env);
      if (!a) return std::nullopt;
      return *a + 1;
    }
    case TermKind::Add:
    case TermKind::Mul: {
      auto a = try_term_value(t->a, env);
      auto b = try_term_value(t->b, env);
      if (!a || !b) return std::nullopt;
      return t->kind == TermKind::Add ? Nat(*a + *b) : Nat(*a * *b);
    }
  }
  throw std::logic_error("unreachable");
}

// ---------------------------------------------------------------------------
// Emission-shape matchers (must mirror pr_compile.cpp)

bool is_var(const TermPtr& t, unsigned v) { return t->kind == TermKind::Var && t->var == v; }
bool is_zero_term(const TermPtr& t) { return t->kind == TermKind::Zero; }

// beta(u, w, i) = r:
//   Exists m. Eq(Vm, S(S(i)*Vw)) & (Lt(r, Vm) & Exists q. Eq(Vu, (Vm*Vq) + r))
struct BetaAtom {
  unsigned u = 0, w = 0;
  TermPtr i_t, r_t;
};

std::optional<BetaAtom> match_beta(const Formula* f) {
  if (f->kind != FormulaKind::Exists) return std::nullopt;
  unsigned m = f->var;
  const Formula* body = f->f.get();
  if (body->kind != FormulaKind::And) return std::nullopt;
  const Formula* eq_m = body->f.get();
  const Formula* rest = body->g.get();
  if (eq_m->kind != FormulaKind::Eq || !is_var(eq_m->s, m)) return std::nullopt;
  // S(S(i)*w)
  const TermPtr& mod = eq_m->t;
  if (mod->kind != TermKind::Succ || mod->a->kind != TermKind::Mul) return std::nullopt;
  const TermPtr& si = mod->a->a;
  const TermPtr& wt = mod->a->b;
  if (si->kind != TermKind::Succ || wt->kind != TermKind::Var) return std::nullopt;
  if (rest->kind != FormulaKind::And) return std::nullopt;
  const Formula* lt = rest->f.get();
  const Formula* ex_q = rest->g.get();
  if (lt->kind != FormulaKind::Lt || !is_var(lt->t, m)) return std::nullopt;
  if (ex_q->kind != FormulaKind::Exists) return std::nullopt;
  unsigned q = ex_q->var;
  const Formula* eq_u = ex_q->f.get();
  if (eq_u->kind != FormulaKind::Eq) return std::nullopt;
  if (eq_u->s->kind != TermKind::Var) return std::nullopt;
  const TermPtr& sum = eq_u->t;
  if (sum->kind != TermKind::Add || sum->a->kind != TermKind::Mul) return std::nullopt;
  if (!is_var(sum->a->a, m) || !is_var(sum->a->b, q)) return std::nullopt;
  if (!fol::equal(sum->b, lt->s)) return std::nullopt;
  BetaAtom out;
  out.u = eq_u->s->var;
  out.w = wt->var;
  out.i_t = si->a;
  out.r_t = lt->s;
  return out;
}

// Course-of-values template:
//   Exists u. Exists w. And(
//     ForAll i. (Lt(i,n) | Eq(i,n)) -> Exists r. (beta(u,w,i,r) & body),
//     beta(u, w, n, out))
struct CvTemplate {
  unsigned u = 0, w = 0, ivar = 0, rvar = 0;
  TermPtr n_t, out_t;
  FormulaPtr body;
  const Formula* root = nullptr;
  bool iterative = false;  // body value at i >= 1 depends only on rec(i-1)
};

bool match_le_guard(const Formula* f, unsigned v, TermPtr& bound_out) {
  // Lt(Vv, t) | Eq(Vv, t)
  if (f->kind != FormulaKind::Or) return false;
  const Formula* a = f->f.get();
  const Formula* b = f->g.get();
  if (a->kind != FormulaKind::Lt || b->kind != FormulaKind::Eq) return false;
  if (!is_var(a->s, v) || !is_var(b->s, v)) return false;
  if (!fol::equal(a->t, b->t)) return false;
  bound_out = a->t;
  return true;
}

bool detect_iterative(const FormulaPtr& body, unsigned ivar, unsigned u, unsigned w);

std::optional<CvTemplate> match_template(const Formula* f) {
  if (f->kind != FormulaKind::Exists) return std::nullopt;
  unsigned u = f->var;
  const Formula* g = f->f.get();
  if (g->kind != FormulaKind::Exists) return std::nullopt;
  unsigned w = g->var;
  const Formula* conj = g->f.get();
  if (conj->kind != FormulaKind::And) return std::nullopt;
  const Formula* all = conj->f.get();
  const Formula* fin = conj->g.get();
  auto fb = match_beta(fin);
  if (!fb || fb->u != u || fb->w != w) return std::nullopt;
  if (all->kind != FormulaKind::ForAll) return std::nullopt;
  unsigned i = all->var;
  const Formula* imp = all->f.get();
  if (imp->kind != FormulaKind::Implies) return std::nullopt;
  TermPtr n_t;
  if (!match_le_guard(imp->f.get(), i, n_t)) return std::nullopt;
  if (!fol::equal(n_t, fb->i_t)) return std::nullopt;
  if (term_has_var(n_t, i)) return std::nullopt;
  const Formula* cell = imp->g.get();
  if (cell->kind != FormulaKind::Exists) return std::nullopt;
  unsigned r = cell->var;
  const Formula* cellb = cell->f.get();
  if (cellb->kind != FormulaKind::And) return std::nullopt;
  auto cb = match_beta(cellb->f.get());
  if (!cb || cb->u != u || cb->w != w) return std::nullopt;
  if (!is_var(cb->i_t, i) || !is_var(cb->r_t, r)) return std::nullopt;
  CvTemplate t;
  t.u = u;
  t.w = w;
  t.ivar = i;
  t.rvar = r;
  t.n_t = n_t;
  t.out_t = fb->r_t;
  t.body = cellb->g;
  t.root = f;
  t.iterative = detect_iterative(t.body, i, u, w);
  return t;
}

// rec(first - 1) emission:
//   Exists tv. (monus_graph(Vi, 1, tv) &
//     ((Lt(Vtv, Vi) & beta(u,w,Vtv,out)) | (!Lt(Vtv, Vi) & Eq(out, 0))))
bool match_pred_rec(const Formula* f, unsigned ivar, unsigned u, unsigned w) {
  if (f->kind != FormulaKind::Exists) return false;
  unsigned tv = f->var;
  const Formula* body = f->f.get();
  if (body->kind != FormulaKind::And) return false;
  const Formula* tg = body->f.get();
  // monus(Vi, 1) = tv: Or(And(Lt(Vi, 1), Eq(Vtv, 0)), Eq(Vi, Add(1, Vtv)))
  if (tg->kind != FormulaKind::Or) return false;
  {
    const Formula* c1 = tg->f.get();
    const Formula* c2 = tg->g.get();
    if (c1->kind != FormulaKind::And || c1->f->kind != FormulaKind::Lt) return false;
    if (!is_var(c1->f->s, ivar)) return false;
    if (c1->g->kind != FormulaKind::Eq || !is_var(c1->g->s, tv) || !is_zero_term(c1->g->t))
      return false;
    if (c2->kind != FormulaKind::Eq || !is_var(c2->s, ivar)) return false;
    if (c2->t->kind != TermKind::Add || !is_var(c2->t->b, tv)) return false;
  }
  const Formula* cases = body->g.get();
  if (cases->kind != FormulaKind::Or) return false;
  const Formula* in_range = cases->f.get();
  if (in_range->kind != FormulaKind::And) return false;
  if (in_range->f->kind != FormulaKind::Lt || !is_var(in_range->f->s, tv) ||
      !is_var(in_range->f->t, ivar))
    return false;
  auto b = match_beta(in_range->g.get());
  if (!b || b->u != u || b->w != w || !is_var(b->i_t, tv)) return false;
  return true;
}

// True when every free occurrence of ivar in the body sits inside a
// rec(i - 1) emission, apart from the base-case guard eqb(i, 0); then the
// chain beyond the base case is the orbit of a fixed step map, and a repeated
// value means the chain is constant from there on.
bool iterative_step_part(const FormulaPtr& f, unsigned ivar, unsigned u, unsigned w) {
  if (match_pred_rec(f.get(), ivar, u, w)) return true;
  switch (f->kind) {
    case FormulaKind::Eq:
    case FormulaKind::Lt:
      return count_term_occurrences(f->s, ivar) + count_term_occurrences(f->t, ivar) == 0;
    case FormulaKind::Not:
      return iterative_step_part(f->f, ivar, u, w);
    case FormulaKind::ForAll:
    case FormulaKind::Exists:
      if (f->var == ivar) return true;
      return iterative_step_part(f->f, ivar, u, w);
    default:
      return iterative_step_part(f->f, ivar, u, w) && iterative_step_part(f->g, ivar, u, w);
  }
}

bool detect_iterative(const FormulaPtr& body, unsigned ivar, unsigned u, unsigned w) {
  // cond(eqb(i, 0), base, step) emission:
  //   Exists gv. (eqb_graph(Vi, 0, gv) & ((!Eq(gv,0) & base) | (Eq(gv,0) & step)))
  if (body->kind != FormulaKind::Exists) return false;
  unsigned gv = body->var;
  const Formula* b = body->f.get();
  if (b->kind != FormulaKind::And) return false;
  const Formula* guard = b->f.get();
  // eqb(Vi, 0) = gv: Or(And(Eq(Vi,0), Eq(gv,1)), And(!Eq(Vi,0), Eq(gv,0)))
  if (guard->kind != FormulaKind::Or) return false;
  {
    const Formula* c1 = guard->f.get();
    if (c1->kind != FormulaKind::And || c1->f->kind != FormulaKind::Eq) return false;
    if (!is_var(c1->f->s, ivar) || !is_zero_term(c1->f->t)) return false;
    if (c1->g->kind != FormulaKind::Eq || !is_var(c1->g->s, gv)) return false;
  }
  const Formula* cases = b->g.get();
  if (cases->kind != FormulaKind::Or) return false;
  const Formula* base_case = cases->f.get();
  const Formula* step_case = cases->g.get();
  if (base_case->kind != FormulaKind::And || step_case->kind != FormulaKind::And) return false;
  FormulaPtr base = base_case->g;
  FormulaPtr step = step_case->g;
  if (count_free_occurrences(base, ivar) != 0) return false;
  return iterative_step_part(step, ivar, u, w);
}

// ---------------------------------------------------------------------------
// Evaluator

struct Chain {
  std::vector<Nat> vals;
  std::optional<size_t> stab;  // vals[stab] == vals[stab+1] (constant beyond)
  bool failed = false;
};

struct ChainKey {
  const Formula* tmpl;
  std::vector<std::pair<unsigned, Nat>> closure;
  bool operator<(const ChainKey& o) const {
    if (tmpl != o.tmpl) return tmpl < o.tmpl;
    return closure < o.closure;
  }
};

struct Evaluator {
  Nat bound;
  Nat iter_cap;
  ScopedEnv env;
  std::map<ChainKey, Chain> chains;

  Evaluator(const Env& base, const Nat& b) : bound(b), env(base) {
    iter_cap = std::max(Nat(65536), b);
  }

  Nat term(const TermPtr& t) {
    auto v = try_term_value(t, env);
    if (!v) throw UnboundVariable("unbound variable in term");
    return *v;
  }

  TriBool eval(const FormulaPtr& f);
  TriBool eval_quant(const FormulaPtr& f);
  TriBool eval_template(const CvTemplate& t);
  Chain* chain_for(const CvTemplate& t);
  std::optional<Nat> chain_value_at(const CvTemplate& t, const Nat& n);

  enum class Res { Solved, Contra, Stuck };
  struct Solver;
  TriBool solve_exists(const Formula* matrix, unsigned var);
};

// Constraint propagation over compiled-graph conjunctions. Bindings are
// forced: every assignment pattern pins the unique value compatible with the
// conjunct, so Contra soundly refutes the branch.
struct Evaluator::Solver {
  Evaluator& ev;
  std::set<unsigned> unknowns;

  explicit Solver(Evaluator& e) : ev(e) {}

  Res solve_conj(std::vector<const Formula*> pending) {
    bool progress = true;
    while (!pending.empty() && progress) {
      progress = false;
      std::vector<const Formula*> next;
      for (size_t idx = 0; idx < pending.size(); ++idx) {
        Res r = step(pending[idx], progress);
        if (r == Res::Contra) return Res::Contra;
        if (r == Res::Stuck) next.push_back(pending[idx]);
      }
      pending = std::move(next);
    }
    return pending.empty() ? Res::Solved : Res::Stuck;
  }

  bool evaluable(const FormulaPtr& f) {
    for (unsigned v : fol::free_vars(f))
      if (!ev.env.find(v)) return false;
    return true;
  }

  Res step(const Formula* c, bool& progress) {
    // beta lookups against an active chain oracle
    if (auto b = match_beta(c)) {
      if (has_oracle(b->u, b->w)) {
        if (auto r = beta_step(*b)) {
          progress = true;
          return *r;
        }
        return Res::Stuck;
      }
      // no active chain for (u, w): fall through to the generic machinery
    }
    if (auto t = match_template(c)) return template_step(*t, progress);
    switch (c->kind) {
      case FormulaKind::And: {
        progress = true;
        std::vector<const Formula*> list;
        flatten(c, list);
        return solve_conj(std::move(list));
      }
      case FormulaKind::Exists: {
        if (ev.env.find(c->var) || unknowns.count(c->var)) return Res::Stuck;  // shadowing
        unknowns.insert(c->var);
        std::vector<const Formula*> list;
        flatten(c->f.get(), list);
        Res r = solve_conj(std::move(list));
        unknowns.erase(c->var);
        if (r != Res::Stuck) progress = true;
        return r;
      }
      case FormulaKind::Or: {
        size_t m = ev.env.mark();
        Res r1 = step_branch(c->f.get());
        if (r1 == Res::Solved) {
          progress = true;
          return Res::Solved;
        }
        ev.env.rollback(m);
        if (r1 == Res::Stuck) return Res::Stuck;
        Res r2 = step_branch(c->g.get());
        if (r2 == Res::Solved) {
          progress = true;
          return Res::Solved;
        }
        ev.env.rollback(m);
        if (r2 == Res::Contra) {
          progress = true;
          return Res::Contra;
        }
        return Res::Stuck;
      }
      case FormulaKind::Eq:
        if (auto r = eq_step(c, progress)) return *r;
        [[fallthrough]];
      default: {
        FormulaPtr self(c, [](const Formula*) {});  // non-owning view
        if (!evaluable(self)) return Res::Stuck;
        TriBool v = ev.eval(self);
        if (v == TriBool::Unknown) return Res::Stuck;
        progress = true;
        return v == TriBool::True ? Res::Solved : Res::Contra;
      }
    }
  }

  Res step_branch(const Formula* d) {
    std::vector<const Formula*> list;
    flatten(d, list);
    return solve_conj(std::move(list));
  }

  static void flatten(const Formula* f, std::vector<const Formula*>& out) {
    if (f->kind == FormulaKind::And) {
      flatten(f->f.get(), out);
      flatten(f->g.get(), out);
    } else {
      out.push_back(f);
    }
  }

  bool bindable(const TermPtr& t, unsigned& var_out) {
    if (t->kind != TermKind::Var) return false;
    if (ev.env.find(t->var)) return false;
    if (!unknowns.count(t->var)) return false;
    var_out = t->var;
    return true;
  }

  // Assignment patterns; each pins the unique value compatible with the atom.
  std::optional<Res> eq_step(const Formula* c, bool& progress) {
    unsigned x;
    auto lhs = try_term_value(c->s, ev.env);
    auto rhs = try_term_value(c->t, ev.env);
    if (lhs && rhs) return std::nullopt;  // fully evaluable, generic path
    if (!lhs && bindable(c->s, x) && rhs) {
      ev.env.set(x, *rhs);
      progress = true;
      return Res::Solved;
    }
    if (!rhs && lhs) {
      // t = Add(a, Vx): x = t - a; t = Add(Mul(a, Vq), Vr): divmod
      const TermPtr& r = c->t;
      if (r->kind == TermKind::Add) {
        auto a = try_term_value(r->a, ev.env);
        unsigned xv;
        if (a && bindable(r->b, xv)) {
          if (*lhs < *a) {
            progress = true;
            return Res::Contra;
          }
          ev.env.set(xv, Nat(*lhs - *a));
          progress = true;
          return Res::Solved;
        }
        if (r->a->kind == TermKind::Mul) {
          auto m = try_term_value(r->a->a, ev.env);
          unsigned qv, rv;
          if (m && *m != 0 && bindable(r->a->b, qv)) {
            if (bindable(r->b, rv) && qv != rv) {
              ev.env.set(qv, Nat(*lhs / *m));
              ev.env.set(rv, Nat(*lhs % *m));
              progress = true;
              return Res::Solved;
            }
            // remainder known: the quotient is forced when it exists at all
            auto rem = try_term_value(r->b, ev.env);
            if (rem) {
              progress = true;
              if (*lhs < *rem || (*lhs - *rem) % *m != 0) return Res::Contra;
              ev.env.set(qv, Nat((*lhs - *rem) / *m));
              return Res::Solved;
            }
          }
        }
      }
      if (r->kind == TermKind::Succ) {
        // t = S(body): solve body = t - 1 when body is a bindable variable
        unsigned xv;
        if (bindable(r->a, xv)) {
          if (*lhs == 0) {
            progress = true;
            return Res::Contra;
          }
          ev.env.set(xv, Nat(*lhs - 1));
          progress = true;
          return Res::Solved;
        }
      }
    }
    return std::nullopt;
  }

  // Chain oracles for beta atoms of enclosing templates under evaluation.
  struct OraclePair {
    unsigned u, w;
    const Chain* chain;
    Nat limit;  // lookups must stay below the current cell index
  };
  std::vector<OraclePair> oracles;

  bool has_oracle(unsigned u, unsigned w) const {
    for (const auto& o : oracles)
      if (o.u == u && o.w == w) return true;
    return false;
  }

  std::optional<Res> beta_step(const BetaAtom& b) {
    for (const auto& o : oracles) {
      if (o.u != b.u || o.w != b.w) continue;
      auto idx = try_term_value(b.i_t, ev.env);
      if (!idx) return std::nullopt;
      std::optional<Nat> val = lookup(o, *idx);
      if (!val) return std::nullopt;
      auto rv = try_term_value(b.r_t, ev.env);
      if (rv) return *rv == *val ? Res::Solved : Res::Contra;
      unsigned x;
      if (b.r_t->kind == TermKind::Var && bindable(b.r_t, x)) {
        ev.env.set(x, *val);
        return Res::Solved;
      }
      return std::nullopt;
    }
    return std::nullopt;
  }

  static std::optional<Nat> lookup(const OraclePair& o, const Nat& idx) {
    if (idx >= o.limit) return std::nullopt;
    if (o.chain->stab && idx >= *o.chain->stab) return o.chain->vals[*o.chain->stab];
    if (idx < o.chain->vals.size()) return o.chain->vals[idx.get_ui()];
    return std::nullopt;
  }

  Res template_step(const CvTemplate& t, bool& progress) {
    for (unsigned v : fol::free_vars(t.n_t))
      if (!ev.env.find(v)) return Res::Stuck;
    auto n = try_term_value(t.n_t, ev.env);
    if (!n) return Res::Stuck;
    auto val = ev.chain_value_at(t, *n);
    if (!val) return Res::Stuck;
    auto out = try_term_value(t.out_t, ev.env);
    if (out) {
      progress = true;
      return *out == *val ? Res::Solved : Res::Contra;
    }
    unsigned x;
    if (bindable(t.out_t, x)) {
      ev.env.set(x, *val);
      progress = true;
      return Res::Solved;
    }
    return Res::Stuck;
  }
};

Chain* Evaluator::chain_for(const CvTemplate& t) {
  ChainKey key;
  key.tmpl = t.root;
  for (unsigned v : fol::free_vars(t.body)) {
    if (v == t.ivar || v == t.rvar || v == t.u || v == t.w) continue;
    const Nat* val = env.find(v);
    if (!val) return nullptr;
    key.closure.emplace_back(v, *val);
  }
  return &chains[std::move(key)];
}

// Value of the course-of-values chain at index n, computing cells on demand by
// solving the body graph; each body is the compiled graph of a function, so
// the cell value is forced.
std::optional<Nat> Evaluator::chain_value_at(const CvTemplate& t, const Nat& n) {
  Chain* ch = chain_for(t);
  if (!ch || ch->failed) return std::nullopt;
  while (!(ch->stab && Nat(ch->vals.size()) > *ch->stab) && Nat(ch->vals.size()) <= n) {
    if (Nat(ch->vals.size()) > iter_cap) return std::nullopt;  // refuse huge eager chains
    Nat i(ch->vals.size());
    size_t m = env.mark();
    bool iok = env.set(t.ivar, i);
    Solver s(*this);
    if (!iok) {
      env.rollback(m);
      ch->failed = true;
      return std::nullopt;
    }
    s.unknowns.insert(t.rvar);
    s.oracles.push_back({t.u, t.w, ch, i});
    std::vector<const Formula*> list;
    Solver::flatten(t.body.get(), list);
    Res r = s.solve_conj(std::move(list));
    const Nat* rv = env.find(t.rvar);
    if (r != Res::Solved || !rv) {
      env.rollback(m);
      ch->failed = true;
      return std::nullopt;
    }
    Nat cell = *rv;
    env.rollback(m);
    if (!ch->vals.empty() && ch->vals.back() == cell && !ch->stab && t.iterative) {
      ch->stab = ch->vals.size() - 1;
    }
    ch->vals.push_back(std::move(cell));
  }
  if (ch->stab && n >= *ch->stab) return ch->vals[*ch->stab];
  return ch->vals[n.get_ui()];
}

TriBool Evaluator::eval_template(const CvTemplate& t) {
  auto n = try_term_value(t.n_t, env);
  auto out = try_term_value(t.out_t, env);
  if (!n || !out) return TriBool::Unknown;
  auto val = chain_value_at(t, *n);
  if (!val) return TriBool::Unknown;
  return *val == *out ? TriBool::True : TriBool::False;
}

TriBool Evaluator::solve_exists(const Formula* matrix, unsigned var) {
  Solver s(*this);
  s.unknowns.insert(var);
  std::vector<const Formula*> list;
  Solver::flatten(matrix, list);
  size_t m = env.mark();
  Res r = s.solve_conj(std::move(list));
  env.rollback(m);
  switch (r) {
    case Res::Solved: return TriBool::True;
    case Res::Contra: return TriBool::False;
    default: return TriBool::Unknown;
  }
}

TriBool Evaluator::eval(const FormulaPtr& f) {
  switch (f->kind) {
    case FormulaKind::Eq: {
      auto a = term(f->s);
      auto b = term(f->t);
      return a == b ? TriBool::True : TriBool::False;
    }
    case FormulaKind::Lt: {
      auto a = term(f->s);
      auto b = term(f->t);
      return a < b ? TriBool::True : TriBool::False;
    }
    case FormulaKind::Not:
      return tb_not(eval(f->f));
    case FormulaKind::And:
      return tb_and(eval(f->f), eval(f->g));
    case FormulaKind::Or:
      return tb_or(eval(f->f), eval(f->g));
    case FormulaKind::Implies:
      return tb_or(tb_not(eval(f->f)), eval(f->g));
    case FormulaKind::ForAll:
    case FormulaKind::Exists:
      return eval_quant(f);
  }
  throw std::logic_error("unreachable");
}

TriBool Evaluator::eval_quant(const FormulaPtr& f) {
  bool exists = f->kind == FormulaKind::Exists;
  unsigned v = f->var;
  const FormulaPtr& matrix = f->f;

  if (env.find(v)) {
    // Shadowed variable: evaluate with the inner binding only.
    Env inner(env.map);
    inner.erase(v);
    Evaluator sub(inner, bound);
    FormulaPtr self = f;
    return sub.eval(self);
  }

  // Exact bounded patterns: exists v.(v < t & ...) / forall v.(v < t -> ...)
  // and the <= variants.
  {
    const Formula* m = matrix.get();
    const Formula* guard = nullptr;
    const Formula* body = nullptr;
    if (exists && m->kind == FormulaKind::And) {
      guard = m->f.get();
      body = m->g.get();
    } else if (!exists && m->kind == FormulaKind::Implies) {
      guard = m->f.get();
      body = m->g.get();
    }
    if (guard) {
      TermPtr bound_term;
      bool inclusive = false;
      if (guard->kind == FormulaKind::Lt && is_var(guard->s, v) && !term_has_var(guard->t, v)) {
        bound_term = guard->t;
      } else if (match_le_guard(guard, v, bound_term) && !term_has_var(bound_term, v)) {
        inclusive = true;
      }
      if (bound_term) {
        auto tv = try_term_value(bound_term, env);
        if (tv) {
          Nat hi = inclusive ? Nat(*tv + 1) : *tv;
          if (hi <= iter_cap + 1) {
            TriBool acc = exists ? TriBool::False : TriBool::True;
            size_t mk = env.mark();
            env.set(v, 0);
            FormulaPtr body_view(body, [](const Formula*) {});
            for (Nat i = 0; i < hi; ++i) {
              env.assign(v, i);
              TriBool r = eval(body_view);
              acc = exists ? tb_or(acc, r) : tb_and(acc, r);
              if (exists && acc == TriBool::True) break;
              if (!exists && acc == TriBool::False) break;
            }
            env.rollback(mk);
            return acc;
          }
          // fall through: too wide to iterate exactly
        }
      }
    }
  }

  // Compiled course-of-values template.
  if (exists) {
    if (auto t = match_template(f.get())) return eval_template(*t);
  }

  // Distribution keeps disjuncts independently solvable.
  if (exists && matrix->kind == FormulaKind::Or) {
    return tb_or(eval(fol::mk_exists(v, matrix->f)), eval(fol::mk_exists(v, matrix->g)));
  }
  if (!exists && matrix->kind == FormulaKind::And) {
    return tb_and(eval(fol::mk_forall(v, matrix->f)), eval(fol::mk_forall(v, matrix->g)));
  }

  // Constraint solving for conjunctive existential matrices (including
  // nested existential prefixes from composition graphs).
  if (exists && (matrix->kind == FormulaKind::And || matrix->kind == FormulaKind::Exists)) {
    TriBool r = solve_exists(matrix.get(), v);
    if (r != TriBool::Unknown) return r;
  }

  size_t vcount = count_free_occurrences(matrix, v);
  if (vcount == 0) return eval(matrix);

  // Stabilization: when every occurrence of v feeds the length slot of an
  // iterative chain template, the matrix is constant once all those chains
  // have stabilized below the current candidate.
  std::vector<CvTemplate> fed;
  if (exists) {
    size_t in_templates = 0;
    std::vector<const Formula*> stack{matrix.get()};
    while (!stack.empty()) {
      const Formula* cur = stack.back();
      stack.pop_back();
      if (auto t = match_template(cur)) {
        if (t->iterative && t->n_t->kind == TermKind::Var && t->n_t->var == v &&
            count_free_occurrences(t->body, v) == 0 && !term_has_var(t->out_t, v)) {
          fed.push_back(*t);
          in_templates += 2;  // the le guard and the final beta
          continue;
        }
      }
      switch (cur->kind) {
        case FormulaKind::Eq:
        case FormulaKind::Lt:
          break;
        case FormulaKind::Not:
          stack.push_back(cur->f.get());
          break;
        case FormulaKind::ForAll:
        case FormulaKind::Exists:
          if (cur->var != v) stack.push_back(cur->f.get());
          break;
        default:
          stack.push_back(cur->f.get());
          stack.push_back(cur->g.get());
          break;
      }
    }
    if (in_templates != vcount || fed.empty()) fed.clear();
  }

  // Witness search 0..bound.
  size_t mk = env.mark();
  env.set(v, 0);
  TriBool out = TriBool::Unknown;
  for (Nat i = 0;; ++i) {
    if (i > bound) break;
    env.assign(v, i);
    TriBool r = eval(matrix);
    if (exists && r == TriBool::True) {
      out = TriBool::True;
      break;
    }
    if (!exists && r == TriBool::False) {
      out = TriBool::False;
      break;
    }
    if (exists && r == TriBool::False && !fed.empty()) {
      bool all_stable = true;
      for (const auto& t : fed) {
        env.rollback(mk);  // chains are keyed on the outer environment
        Chain* ch = chain_for(t);
        env.set(v, i);
        if (!ch || !ch->stab || Nat(*ch->stab) >= i) {
          all_stable = false;
          break;
        }
      }
      if (all_stable) {
        out = TriBool::False;
        break;
      }
    }
  }
  env.rollback(mk);
  return out;
}

}  // namespace

Nat term_value(const TermPtr& t, const Env& env) {
  ScopedEnv se(env);
  auto v = try_term_value(t, se);
  if (!v) throw UnboundVariable("unbound variable in term");
  return *v;
}

TriBool eval_bounded(const FormulaPtr& f, const Env& env, const Nat& bound) {
  for (unsigned v : fol::free_vars(f)) {
    if (!env.count(v)) throw UnboundVariable("env does not cover v" + std::to_string(v));
  }
  Evaluator ev(env, bound);
  return ev.eval(f);
}

}  // namespace mmk::pr
