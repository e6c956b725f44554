#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "mmk/bignum.hpp"
#include "mmk/fol.hpp"

namespace mmk::coding {

// Self-delimiting binary Goedel coding, read MSB-first as a natural number.
// One global scheme covers terms, formulas, sequences and proofs; the kind tag
// keeps them apart. Code growth is linear in syntax size.
//
//   code     = 1 ++ kind(3) ++ body          (the leading 1 makes bit-length
//                                             recoverable from the value)
//   kind     : 1 term | 2 formula | 3 sequence | 4 proof
//   term body: tag(3) ++ ...
//              0 zero | 1 succ field(t) | 2 add field(s) field(t)
//              | 3 mul field(s) field(t) | 4 var chunk(i) | 5 num chunk(k)
//   formula  : tag(3) ++ ...
//              0 eq field field | 1 lt field field | 2 not field
//              | 3 and ff | 4 or ff | 5 implies ff
//              | 6 forall chunk(v) field(f) | 7 exists chunk(v) field(f)
//   seq body : chunk(n) ++ field(e1) ++ ... ++ field(en)   (entries: any Nat)
//   proof    : same layout as seq; entries are step-record sequence codes
//
//   field(x) = chunk(bitlen(x)) ++ x written in exactly bitlen(x) bits
//   chunk(k) = gamma(k+1); gamma(m) = (bitlen(m)-1) zeros ++ binary(m)
//
// Canonicality: a succ field never codes zero or a num node (S-towers over 0
// are always coded as a single num node with tag 5, k >= 1). Decoding rejects
// non-canonical and malformed codes instead of repairing them.

struct DecodeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr int kKindTerm = 1;
constexpr int kKindFormula = 2;
constexpr int kKindSeq = 3;
constexpr int kKindProof = 4;

Nat encode_term(const fol::TermPtr& t);
Nat encode_formula(const fol::FormulaPtr& f);
fol::TermPtr decode_term(const Nat& code);
fol::FormulaPtr decode_formula(const Nat& code);

// Length-prefixed, order-preserving sequence of arbitrary naturals.
Nat encode_seq(const std::vector<Nat>& entries);
std::vector<Nat> decode_seq(const Nat& code);

// Proof codes share the sequence layout under their own kind tag.
Nat encode_proof_records(const std::vector<Nat>& step_records);
std::vector<Nat> decode_proof_records(const Nat& code);

// Kind tag of a code, or -1 when the code is too short to carry one.
int code_kind(const Nat& code);

// Bit strings as (value, length) pairs with MSB-first concatenation.
class BitWriter {
 public:
  void append(const Nat& value, unsigned long bits);
  void append_chunk(const Nat& k);        // chunk(k)
  void append_field(const Nat& subcode);  // field(subcode)
  // Concatenation of everything appended, plus total bit count.
  std::pair<Nat, unsigned long> take();

 private:
  std::vector<std::pair<Nat, unsigned long>> parts_;
};

class BitReader {
 public:
  explicit BitReader(const Nat& code);
  BitReader(const Nat& value, unsigned long bits);
  Nat take(unsigned long bits);
  Nat read_chunk();
  Nat read_field();
  unsigned long remaining() const { return len_; }
  void expect_done() const;

 private:
  Nat suffix_;
  unsigned long len_;
};

}  // namespace mmk::coding
