#include "mmk/pr.hpp"

namespace mmk::pr {

using fol::FormulaPtr;
using fol::TermPtr;

// Graph emission shapes. The bounded evaluator recognizes these exact shapes
// (see eval.cpp), so changes here must be mirrored there.
//
//   le(a, b)          Or(Lt(a,b), Eq(a,b))
//   beta(u, w, i, r)  Exists m. Eq(m, S(S(i)*w)) & (Lt(r, m) &
//                       Exists q. Eq(u, (m*q) + r))
//   cvrec template    Exists u. Exists w.
//                       (ForAll i. le(i, n) -> Exists r. (beta(u,w,i,r) & body))
//                       & beta(u, w, n, out)
// with the course-of-values chain pinned cell by cell through the beta
// relation; the beta lemma supplies (u, w) for every finite chain.

namespace {

using namespace fol;

TermPtr V(unsigned i) { return mk_var(i); }

FormulaPtr le(TermPtr a, TermPtr b) { return mk_or(mk_lt(a, b), mk_eq(a, b)); }

FormulaPtr and_chain(std::vector<FormulaPtr> fs) {
  FormulaPtr acc = fs.at(0);
  for (size_t i = 1; i < fs.size(); ++i) acc = mk_and(acc, fs[i]);
  return acc;
}

// beta(u, w, i) = u mod (1 + (i+1) * w), Goedel's sequence decoder.
FormulaPtr beta_atom(unsigned u, unsigned w, TermPtr i_term, TermPtr r_term, unsigned& fresh) {
  unsigned m = fresh++;
  unsigned q = fresh++;
  FormulaPtr modulus = mk_eq(V(m), mk_succ(mk_mul(mk_succ(i_term), V(w))));
  FormulaPtr division = mk_exists(q, mk_eq(V(u), mk_add(mk_mul(V(m), V(q)), r_term)));
  return mk_exists(m, mk_and(modulus, mk_and(mk_lt(r_term, V(m)), division)));
}

struct CvCtx {
  unsigned u, w;
  unsigned first;  // variable carrying the recursion argument
};

struct Compiler {
  unsigned& fresh;
  std::vector<CvCtx> cv;

  FormulaPtr go(const PRPtr& f, const std::vector<unsigned>& ins, unsigned out);
  FormulaPtr native_graph(Native n, const std::vector<unsigned>& ins, unsigned out);
};

PRPtr pow2_definition() {
  // pow2(0) = 1, pow2(n) = 2 * pow2(n - 1)
  static PRPtr def = [] {
    PRPtr is0 = comp(native_fn(Native::Eqb), {proj(1, 1), constant(0, 1)});
    PRPtr dec = comp(native_fn(Native::Monus), {proj(1, 1), constant(1, 1)});
    PRPtr dbl = comp(native_fn(Native::Mul), {constant(2, 1), rec_call(dec)});
    return cvrec(cond(is0, constant(1, 1), dbl));
  }();
  return def;
}

PRPtr bitlen_definition() {
  // bitlen(x) = least l <= x with x < 2^l  (and bitlen(0) = 0)
  static PRPtr def = [] {
    PRPtr p = comp(native_fn(Native::Pow2), {proj(1, 2)});
    PRPtr below = bmin(comp(native_fn(Native::Ltb), {proj(2, 2), p}));
    return comp(below, {proj(1, 1), proj(1, 1)});
  }();
  return def;
}

FormulaPtr Compiler::native_graph(Native n, const std::vector<unsigned>& ins, unsigned out) {
  TermPtr o = V(out);
  TermPtr x = V(ins[0]);
  TermPtr y = ins.size() > 1 ? V(ins[1]) : nullptr;
  switch (n) {
    case Native::Add:
      return mk_eq(o, mk_add(x, y));
    case Native::Mul:
      return mk_eq(o, mk_mul(x, y));
    case Native::Monus:
      return mk_or(mk_and(mk_lt(x, y), mk_eq(o, mk_zero())), mk_eq(x, mk_add(y, o)));
    case Native::Ltb:
      return mk_or(mk_and(mk_lt(x, y), mk_eq(o, numeral(1))),
                   mk_and(mk_not(mk_lt(x, y)), mk_eq(o, mk_zero())));
    case Native::Leb:
      return mk_or(mk_and(le(x, y), mk_eq(o, numeral(1))),
                   mk_and(mk_not(le(x, y)), mk_eq(o, mk_zero())));
    case Native::Eqb:
      return mk_or(mk_and(mk_eq(x, y), mk_eq(o, numeral(1))),
                   mk_and(mk_not(mk_eq(x, y)), mk_eq(o, mk_zero())));
    case Native::Div: {
      unsigned r = fresh++;
      FormulaPtr nonzero = mk_and(
          mk_not(mk_eq(y, mk_zero())),
          mk_exists(r, mk_and(mk_lt(V(r), y), mk_eq(x, mk_add(mk_mul(y, o), V(r))))));
      return mk_or(mk_and(mk_eq(y, mk_zero()), mk_eq(o, mk_zero())), nonzero);
    }
    case Native::Mod: {
      unsigned q = fresh++;
      FormulaPtr nonzero =
          mk_and(mk_not(mk_eq(y, mk_zero())),
                 mk_exists(q, mk_and(mk_lt(o, y), mk_eq(x, mk_add(mk_mul(y, V(q)), o)))));
      return mk_or(mk_and(mk_eq(y, mk_zero()), mk_eq(o, x)), nonzero);
    }
    case Native::Pow2:
      return go(pow2_definition(), ins, out);
    case Native::BitLen:
      return go(bitlen_definition(), ins, out);
  }
  throw std::logic_error("unreachable");
}

FormulaPtr Compiler::go(const PRPtr& f, const std::vector<unsigned>& ins, unsigned out) {
  if (ins.size() != static_cast<size_t>(f->arity))
    throw std::logic_error("compile: input slot count does not match arity");
  switch (f->kind) {
    case NodeKind::Zero:
      return mk_eq(V(out), mk_zero());
    case NodeKind::Succ:
      return mk_eq(V(out), mk_succ(V(ins[0])));
    case NodeKind::Proj:
      return mk_eq(V(out), V(ins[f->i - 1]));
    case NodeKind::Const:
      return mk_eq(V(out), numeral(f->value));
    case NodeKind::Native:
      return native_graph(f->native, ins, out);
    case NodeKind::Comp: {
      std::vector<unsigned> ws;
      for (size_t i = 0; i < f->gs.size(); ++i) ws.push_back(fresh++);
      std::vector<FormulaPtr> conj;
      for (size_t i = 0; i < f->gs.size(); ++i) conj.push_back(go(f->gs[i], ins, ws[i]));
      conj.push_back(go(f->f, ws, out));
      FormulaPtr body = and_chain(std::move(conj));
      for (size_t i = f->gs.size(); i-- > 0;) body = mk_exists(ws[i], body);
      return body;
    }
    case NodeKind::Cond: {
      unsigned gv = fresh++;
      FormulaPtr guard = go(f->f, ins, gv);
      FormulaPtr then_b = mk_and(mk_not(mk_eq(V(gv), mk_zero())), go(f->gs[0], ins, out));
      FormulaPtr else_b = mk_and(mk_eq(V(gv), mk_zero()), go(f->gs[1], ins, out));
      return mk_exists(gv, mk_and(guard, mk_or(then_b, else_b)));
    }
    case NodeKind::Prec: {
      // Desugar to course-of-values recursion on the first argument.
      int k = f->arity;
      PRPtr is0 = comp(native_fn(Native::Eqb), {proj(1, k), constant(0, k)});
      std::vector<PRPtr> rest;
      for (int i = 2; i <= k; ++i) rest.push_back(proj(i, k));
      PRPtr base_call = rest.empty() ? f->f : comp(f->f, rest);
      PRPtr dec = comp(native_fn(Native::Monus), {proj(1, k), constant(1, k)});
      std::vector<PRPtr> step_args = {dec, rec_call(dec)};
      for (int i = 2; i <= k; ++i) step_args.push_back(proj(i, k));
      PRPtr step_call = comp(f->g, std::move(step_args));
      return go(cvrec(cond(is0, base_call, step_call)), ins, out);
    }
    case NodeKind::Cvrec: {
      unsigned u = fresh++;
      unsigned w = fresh++;
      unsigned i = fresh++;
      unsigned r = fresh++;
      cv.push_back({u, w, i});
      std::vector<unsigned> body_ins = ins;
      body_ins[0] = i;
      FormulaPtr body = go(f->f, body_ins, r);
      cv.pop_back();
      FormulaPtr cell = mk_exists(r, mk_and(beta_atom(u, w, V(i), V(r), fresh), body));
      FormulaPtr all = mk_forall(i, mk_implies(le(V(i), V(ins[0])), cell));
      FormulaPtr fin = beta_atom(u, w, V(ins[0]), V(out), fresh);
      return mk_exists(u, mk_exists(w, mk_and(all, fin)));
    }
    case NodeKind::Rec: {
      if (cv.empty()) throw std::logic_error("compile: rec outside cvrec");
      CvCtx c = cv.back();
      unsigned tv = fresh++;
      FormulaPtr tgraph = go(f->f, ins, tv);
      FormulaPtr in_range =
          mk_and(mk_lt(V(tv), V(c.first)), beta_atom(c.u, c.w, V(tv), V(out), fresh));
      FormulaPtr out_of_range = mk_and(mk_not(mk_lt(V(tv), V(c.first))), mk_eq(V(out), mk_zero()));
      return mk_exists(tv, mk_and(tgraph, mk_or(in_range, out_of_range)));
    }
    case NodeKind::Bmin: {
      // least y <= b with f(y, rest) != 0, else b + 1
      unsigned y = fresh++;
      unsigned r1 = fresh++;
      unsigned r2 = fresh++;
      std::vector<unsigned> at_out = ins;
      at_out[0] = out;
      FormulaPtr hit = mk_exists(r1, mk_and(go(f->f, at_out, r1), mk_not(mk_eq(V(r1), mk_zero()))));
      std::vector<unsigned> at_y = ins;
      at_y[0] = y;
      FormulaPtr miss_y = mk_exists(r2, mk_and(go(f->f, at_y, r2), mk_eq(V(r2), mk_zero())));
      FormulaPtr found =
          mk_and(le(V(out), V(ins[0])),
                 mk_and(hit, mk_forall(y, mk_implies(mk_lt(V(y), V(out)), miss_y))));
      FormulaPtr none = mk_and(mk_eq(V(out), mk_succ(V(ins[0]))),
                               mk_forall(y, mk_implies(le(V(y), V(ins[0])), miss_y)));
      return mk_or(found, none);
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace

FormulaPtr compile_graph(const PRPtr& f, const std::vector<unsigned>& ins, unsigned out,
                         unsigned& fresh) {
  if (ins.size() != static_cast<size_t>(f->arity)) throw ArityError("compile_graph: slot count");
  Compiler c{fresh, {}};
  return c.go(f, ins, out);
}

FormulaPtr compile_pr(const PRPtr& f) {
  if (f->free_rec) throw std::logic_error("compile_pr: rec node outside cvrec");
  std::vector<unsigned> ins;
  for (int i = 1; i <= f->arity; ++i) ins.push_back(static_cast<unsigned>(i));
  unsigned fresh = static_cast<unsigned>(f->arity) + 1;
  return compile_graph(f, ins, 0, fresh);
}

}  // namespace mmk::pr
