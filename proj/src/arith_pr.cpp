#include "mmk/arith_pr.hpp"

#include <map>
#include <mutex>

namespace mmk::arith {

using namespace pr::build;
using pr::cvrec;

namespace {
constexpr unsigned long kStateShift = 32;

Exp shift_left(Exp a, Exp bits) { return a * pow2_e(bits); }
}  // namespace

Exp st_mk(Exp suffix, Exp len) { return shift_left(suffix, {pr::constant(Nat(kStateShift), suffix.fn->arity)}) + len; }
Exp st_s(const Scope& s, Exp st) { return div_e(st, pow2_e(s.lit(kStateShift))); }
Exp st_l(const Scope& s, Exp st) { return mod_e(st, pow2_e(s.lit(kStateShift))); }
Exp st_total(const Scope& s, Exp code) {
  return shift_left(code, s.lit(kStateShift)) + bitlen_e(code);
}

namespace {
Exp gz(const Scope& s, Exp st) { return monus(st_l(s, st), bitlen_e(st_s(s, st))); }
}  // namespace

Exp ch_len(const Scope& s, Exp st) { return s.lit(2) * gz(s, st) + s.lit(1); }
Exp ch_val(const Scope& s, Exp st) {
  return monus(div_e(st_s(s, st), pow2_e(monus(st_l(s, st), ch_len(s, st)))), s.lit(1));
}
Exp ch_rest(const Scope& s, Exp st) {
  Exp rem = monus(st_l(s, st), ch_len(s, st));
  return st_mk(mod_e(st_s(s, st), pow2_e(rem)), rem);
}
Exp ch_ok(const Scope& s, Exp st) {
  return band(ltb(s.lit(0), st_s(s, st)), leb(ch_len(s, st), st_l(s, st)));
}

Exp f_len(const Scope& s, Exp st) { return ch_val(s, st); }
Exp f_val(const Scope& s, Exp st) {
  Exp st2 = ch_rest(s, st);
  return div_e(st_s(s, st2), pow2_e(monus(st_l(s, st2), f_len(s, st))));
}
Exp f_rest(const Scope& s, Exp st) {
  Exp st2 = ch_rest(s, st);
  Exp rem = monus(st_l(s, st2), f_len(s, st));
  return st_mk(mod_e(st_s(s, st2), pow2_e(rem)), rem);
}
Exp f_ok(const Scope& s, Exp st) {
  return all_of(s, {ch_ok(s, st), leb(f_len(s, st), st_l(s, ch_rest(s, st))),
                    eqb(bitlen_e(f_val(s, st)), f_len(s, st))});
}

Exp hdr_ok(const Scope& s, Exp c) { return leb(s.lit(7), bitlen_e(c)); }
Exp code_kind(const Scope& s, Exp c) {
  return monus(div_e(c, pow2_e(monus(bitlen_e(c), s.lit(4)))), s.lit(8));
}
Exp body_st(const Scope& s, Exp c) {
  Exp rem = monus(bitlen_e(c), s.lit(4));
  return st_mk(mod_e(c, pow2_e(rem)), rem);
}
Exp code_tag(const Scope& s, Exp c) {
  Exp bs = body_st(s, c);
  return div_e(st_s(s, bs), pow2_e(monus(st_l(s, bs), s.lit(3))));
}
Exp args_st(const Scope& s, Exp c) {
  Exp bs = body_st(s, c);
  Exp rem = monus(st_l(s, bs), s.lit(3));
  return st_mk(mod_e(st_s(s, bs), pow2_e(rem)), rem);
}

Exp arg1(const Scope& s, Exp c) { return f_val(s, args_st(s, c)); }
Exp rest1(const Scope& s, Exp c) { return f_rest(s, args_st(s, c)); }
Exp arg2(const Scope& s, Exp c) { return f_val(s, rest1(s, c)); }
Exp chunk_arg(const Scope& s, Exp c) { return ch_val(s, args_st(s, c)); }
Exp qvar(const Scope& s, Exp c) { return ch_val(s, args_st(s, c)); }
Exp qbody(const Scope& s, Exp c) { return f_val(s, ch_rest(s, args_st(s, c))); }

Exp seq_count(const Scope& s, Exp c) { return ch_val(s, body_st(s, c)); }
Exp seq_st0(const Scope& s, Exp c) { return ch_rest(s, body_st(s, c)); }

Exp append_chunk(const Scope& s, Exp prefix, Exp k) {
  Exp m = k + s.lit(1);
  Exp len = monus(s.lit(2) * bitlen_e(m), s.lit(1));
  return shift_left(prefix, len) + m;
}
Exp append_field(const Scope& s, Exp prefix, Exp x) {
  Exp b = bitlen_e(x);
  Exp chunk_len = monus(s.lit(2) * bitlen_e(b + s.lit(1)), s.lit(1));
  return shift_left(shift_left(prefix, chunk_len) + (b + s.lit(1)), b) + x;
}
Exp mk0(const Scope& s, int kind, int tag) { return s.lit(64ul + 8 * kind + tag); }
Exp mk1(const Scope& s, int kind, int tag, Exp c1) {
  return append_field(s, mk0(s, kind, tag), c1);
}
Exp mk2(const Scope& s, int kind, int tag, Exp c1, Exp c2) {
  return append_field(s, mk1(s, kind, tag, c1), c2);
}
Exp mkq(const Scope& s, int tag, Exp v, Exp fcode) {
  return append_field(s, append_chunk(s, mk0(s, 2, tag), v), fcode);
}
Exp mk_var_code(const Scope& s, Exp i) { return append_chunk(s, mk0(s, 1, 4), i); }
Exp mk_num_code(const Scope& s, Exp k) { return append_chunk(s, mk0(s, 1, 5), k); }

Exp mk_succ_code(const Scope& s, Exp t) {
  // S over a numeral collapses into the numeral (canonical form)
  Exp is_num = eqb(code_tag(s, t), s.lit(5));
  Exp is_zero = eqb(t, s.lit(kZeroCode));
  return ite(is_zero, mk_num_code(s, s.lit(1)),
             ite(is_num, mk_num_code(s, chunk_arg(s, t) + s.lit(1)), mk1(s, 1, 1, t)));
}

Exp numeral_code(const Scope& s, Exp b) {
  return ite(eqb(b, s.lit(0)), s.lit(kZeroCode), mk_num_code(s, b));
}

namespace {

Exp tag_switch(const Scope& s, Exp tag, const std::vector<std::pair<int, Exp>>& cases,
               Exp otherwise) {
  Exp acc = otherwise;
  for (auto it = cases.rbegin(); it != cases.rend(); ++it) {
    acc = ite(eqb(tag, s.lit(static_cast<unsigned long>(it->first))), it->second, acc);
  }
  return acc;
}

Exp st_empty(const Scope& s, Exp st) { return eqb(st_l(s, st), s.lit(0)); }

PRPtr build_wf_term() {
  Scope s(1);
  Exp c = s.arg(1);
  Exp as = args_st(s, c);
  Exp sub = arg1(s, c);
  Exp wf_succ_arg = all_of(
      s, {f_ok(s, as), st_empty(s, f_rest(s, as)), rec(sub),
          bnot(eqb(code_tag(s, sub), s.lit(0))), bnot(eqb(code_tag(s, sub), s.lit(5)))});
  Exp two_fields =
      all_of(s, {f_ok(s, as), f_ok(s, rest1(s, c)), st_empty(s, f_rest(s, rest1(s, c))),
                 rec(arg1(s, c)), rec(arg2(s, c))});
  Exp var_ok = all_of(s, {ch_ok(s, as), st_empty(s, ch_rest(s, as))});
  Exp num_ok =
      all_of(s, {ch_ok(s, as), st_empty(s, ch_rest(s, as)), leb(s.lit(1), ch_val(s, as))});
  Exp body = tag_switch(s, code_tag(s, c),
                        {{0, st_empty(s, as)},
                         {1, wf_succ_arg},
                         {2, two_fields},
                         {3, two_fields},
                         {4, var_ok},
                         {5, num_ok}},
                        s.lit(0));
  return cvrec(
      all_of(s, {hdr_ok(s, c), eqb(code_kind(s, c), s.lit(1)), body}).fn);
}

PRPtr build_wf_formula() {
  Scope s(1);
  Exp c = s.arg(1);
  Exp as = args_st(s, c);
  PRPtr wt = wf_term_fn();
  Exp atom_ok =
      all_of(s, {f_ok(s, as), f_ok(s, rest1(s, c)), st_empty(s, f_rest(s, rest1(s, c))),
                 call(wt, {arg1(s, c)}), call(wt, {arg2(s, c)})});
  Exp not_ok = all_of(s, {f_ok(s, as), st_empty(s, f_rest(s, as)), rec(arg1(s, c))});
  Exp bin_ok =
      all_of(s, {f_ok(s, as), f_ok(s, rest1(s, c)), st_empty(s, f_rest(s, rest1(s, c))),
                 rec(arg1(s, c)), rec(arg2(s, c))});
  Exp q_rest = ch_rest(s, as);
  Exp quant_ok = all_of(s, {ch_ok(s, as), f_ok(s, q_rest), st_empty(s, f_rest(s, q_rest)),
                            rec(qbody(s, c))});
  Exp body = tag_switch(s, code_tag(s, c),
                        {{0, atom_ok},
                         {1, atom_ok},
                         {2, not_ok},
                         {3, bin_ok},
                         {4, bin_ok},
                         {5, bin_ok},
                         {6, quant_ok},
                         {7, quant_ok}},
                        s.lit(0));
  return cvrec(
      all_of(s, {hdr_ok(s, c), eqb(code_kind(s, c), s.lit(2)), body}).fn);
}

PRPtr build_subst_term() {
  Scope s(3);
  Exp c = s.arg(1), v = s.arg(2), t = s.arg(3);
  Exp tag = code_tag(s, c);
  Exp var_case = ite(eqb(chunk_arg(s, c), v), t, c);
  Exp body = tag_switch(s, tag,
                        {{0, c},
                         {1, mk_succ_code(s, rec(arg1(s, c)))},
                         {2, mk2(s, 1, 2, rec(arg1(s, c)), rec(arg2(s, c)))},
                         {3, mk2(s, 1, 3, rec(arg1(s, c)), rec(arg2(s, c)))},
                         {4, var_case},
                         {5, c}},
                        c);
  return cvrec(body.fn);
}

PRPtr build_subst_formula() {
  Scope s(3);
  Exp c = s.arg(1), v = s.arg(2), t = s.arg(3);
  PRPtr st_fn = subst_term_fn();
  auto sub_t = [&](Exp x) { return call(st_fn, {x, v, t}); };
  Exp quant6 = ite(eqb(qvar(s, c), v), c, mkq(s, 6, qvar(s, c), rec(qbody(s, c))));
  Exp quant7 = ite(eqb(qvar(s, c), v), c, mkq(s, 7, qvar(s, c), rec(qbody(s, c))));
  Exp body = tag_switch(s, code_tag(s, c),
                        {{0, mk2(s, 2, 0, sub_t(arg1(s, c)), sub_t(arg2(s, c)))},
                         {1, mk2(s, 2, 1, sub_t(arg1(s, c)), sub_t(arg2(s, c)))},
                         {2, mk1(s, 2, 2, rec(arg1(s, c)))},
                         {3, mk2(s, 2, 3, rec(arg1(s, c)), rec(arg2(s, c)))},
                         {4, mk2(s, 2, 4, rec(arg1(s, c)), rec(arg2(s, c)))},
                         {5, mk2(s, 2, 5, rec(arg1(s, c)), rec(arg2(s, c)))},
                         {6, quant6},
                         {7, quant7}},
                        c);
  return cvrec(body.fn);
}

PRPtr build_occurs_term() {
  Scope s(2);
  Exp c = s.arg(1), v = s.arg(2);
  Exp body = tag_switch(s, code_tag(s, c),
                        {{1, rec(arg1(s, c))},
                         {2, bor(s, rec(arg1(s, c)), rec(arg2(s, c)))},
                         {3, bor(s, rec(arg1(s, c)), rec(arg2(s, c)))},
                         {4, eqb(chunk_arg(s, c), v)}},
                        s.lit(0));
  return cvrec(body.fn);
}

PRPtr build_occurs_formula() {
  Scope s(2);
  Exp c = s.arg(1), v = s.arg(2);
  PRPtr ot = occurs_term_fn();
  Exp atoms = bor(s, call(ot, {arg1(s, c), v}), call(ot, {arg2(s, c), v}));
  Exp quant = ite(eqb(qvar(s, c), v), s.lit(0), rec(qbody(s, c)));
  Exp body = tag_switch(s, code_tag(s, c),
                        {{0, atoms},
                         {1, atoms},
                         {2, rec(arg1(s, c))},
                         {3, bor(s, rec(arg1(s, c)), rec(arg2(s, c)))},
                         {4, bor(s, rec(arg1(s, c)), rec(arg2(s, c)))},
                         {5, bor(s, rec(arg1(s, c)), rec(arg2(s, c)))},
                         {6, quant},
                         {7, quant}},
                        s.lit(0));
  return cvrec(body.fn);
}

PRPtr build_free_for() {
  Scope s(3);
  Exp c = s.arg(1), v = s.arg(2), t = s.arg(3);
  Exp captured = band(call(occurs_formula_fn(), {qbody(s, c), v}),
                      call(occurs_term_fn(), {t, qvar(s, c)}));
  Exp quant = ite(eqb(qvar(s, c), v), s.lit(1), ite(captured, s.lit(0), rec(qbody(s, c))));
  Exp body = tag_switch(s, code_tag(s, c),
                        {{0, s.lit(1)},
                         {1, s.lit(1)},
                         {2, rec(arg1(s, c))},
                         {3, band(rec(arg1(s, c)), rec(arg2(s, c)))},
                         {4, band(rec(arg1(s, c)), rec(arg2(s, c)))},
                         {5, band(rec(arg1(s, c)), rec(arg2(s, c)))},
                         {6, quant},
                         {7, quant}},
                        s.lit(1));
  return cvrec(body.fn);
}

PRPtr build_neg_code() {
  Scope s(1);
  return mk1(s, 2, 2, s.arg(1)).fn;
}

PRPtr build_numeral_code() {
  Scope s(1);
  return numeral_code(s, s.arg(1)).fn;
}

}  // namespace

PRPtr wf_term_fn() {
  static PRPtr f = build_wf_term();
  return f;
}
PRPtr wf_formula_fn() {
  static PRPtr f = build_wf_formula();
  return f;
}
PRPtr subst_term_fn() {
  static PRPtr f = build_subst_term();
  return f;
}
PRPtr subst_formula_fn() {
  static PRPtr f = build_subst_formula();
  return f;
}
PRPtr occurs_term_fn() {
  static PRPtr f = build_occurs_term();
  return f;
}
PRPtr occurs_formula_fn() {
  static PRPtr f = build_occurs_formula();
  return f;
}
PRPtr free_for_fn() {
  static PRPtr f = build_free_for();
  return f;
}
PRPtr neg_code_fn() {
  static PRPtr f = build_neg_code();
  return f;
}
PRPtr numeral_code_fn() {
  static PRPtr f = build_numeral_code();
  return f;
}

PRPtr sub_n(int n) {
  if (n < 1) throw std::invalid_argument("sub_n: n must be >= 1");
  static std::map<int, PRPtr> cache;
  static std::mutex cache_mu;
  std::lock_guard<std::mutex> lock(cache_mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  Scope s(n + 1);
  Exp cur = s.arg(1);
  for (int i = 1; i <= n; ++i) {
    cur = call(subst_formula_fn(),
               {cur, s.lit(static_cast<unsigned long>(i)), call(numeral_code_fn(), {s.arg(i + 1)})});
  }
  Exp guarded = ite(call(wf_formula_fn(), {s.arg(1)}), cur, s.arg(1));
  PRPtr f = guarded.fn;
  cache.emplace(n, f);
  return f;
}

}  // namespace mmk::arith
