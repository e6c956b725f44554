#pragma once

#include "mmk/pr.hpp"
#include "mmk/pr_build.hpp"

namespace mmk::arith {

// Arithmetized syntax: primitive-recursive functions over Goedel codes,
// operating bit-exactly on the coding.hpp layout. Parse states pack a code
// suffix with its remaining bit count as  suffix * 2^32 + count.

using pr::PRPtr;
using pr::build::Exp;
using pr::build::Scope;

// parse-state primitives
Exp st_mk(Exp suffix, Exp len);
Exp st_s(const Scope& s, Exp st);
Exp st_l(const Scope& s, Exp st);
Exp st_total(const Scope& s, Exp code);

// chunk(k) = gamma(k+1) reader
Exp ch_len(const Scope& s, Exp st);
Exp ch_val(const Scope& s, Exp st);
Exp ch_rest(const Scope& s, Exp st);
Exp ch_ok(const Scope& s, Exp st);

// field = chunk(bit length) ++ raw bits reader
Exp f_len(const Scope& s, Exp st);
Exp f_val(const Scope& s, Exp st);
Exp f_rest(const Scope& s, Exp st);
Exp f_ok(const Scope& s, Exp st);

// object header
Exp hdr_ok(const Scope& s, Exp c);  // guard + kind + tag present
Exp code_kind(const Scope& s, Exp c);
Exp code_tag(const Scope& s, Exp c);
Exp body_st(const Scope& s, Exp c);
Exp args_st(const Scope& s, Exp c);

// field accessors relative to the argument area
Exp arg1(const Scope& s, Exp c);
Exp rest1(const Scope& s, Exp c);
Exp arg2(const Scope& s, Exp c);
Exp chunk_arg(const Scope& s, Exp c);  // var index / numeral value
Exp qvar(const Scope& s, Exp c);
Exp qbody(const Scope& s, Exp c);

// sequence bodies (kinds 3 and 4 share the layout)
Exp seq_count(const Scope& s, Exp c);
Exp seq_st0(const Scope& s, Exp c);

// builders
Exp append_chunk(const Scope& s, Exp prefix, Exp k);
Exp append_field(const Scope& s, Exp prefix, Exp x);
Exp mk0(const Scope& s, int kind, int tag);
Exp mk1(const Scope& s, int kind, int tag, Exp c1);
Exp mk2(const Scope& s, int kind, int tag, Exp c1, Exp c2);
Exp mkq(const Scope& s, int tag, Exp v, Exp fcode);
Exp mk_var_code(const Scope& s, Exp i);
Exp mk_num_code(const Scope& s, Exp k);
Exp mk_succ_code(const Scope& s, Exp t);  // canonicalizes towers
Exp numeral_code(const Scope& s, Exp b);

constexpr unsigned long kZeroCode = 72;  // 1 001 000

// cached definitions
PRPtr wf_term_fn();
PRPtr wf_formula_fn();
PRPtr subst_term_fn();     // (c, v, t): plain substitution of a term code
PRPtr subst_formula_fn();  // (c, v, t): stops at binders of v
PRPtr occurs_term_fn();    // (c, v) -> 0/1
PRPtr occurs_formula_fn();
PRPtr free_for_fn();       // (c, v, t) -> 0/1: t substitutable for v in c
PRPtr neg_code_fn();       // (c) -> code of the negation
PRPtr numeral_code_fn();   // (b) -> code of the numeral b

// (a, b1..bn) -> code of the coded formula with numerals substituted for
// v1..vn; ill-formed codes pass through unchanged.
PRPtr sub_n(int n);

}  // namespace mmk::arith
