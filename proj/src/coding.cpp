#include "mmk/coding.hpp"

namespace mmk::coding {

using fol::Formula;
using fol::FormulaKind;
using fol::FormulaPtr;
using fol::Term;
using fol::TermKind;
using fol::TermPtr;

void BitWriter::append(const Nat& value, unsigned long bits) {
  if (bit_length(value) > bits) throw std::logic_error("BitWriter: value wider than field");
  parts_.emplace_back(value, bits);
}

void BitWriter::append_chunk(const Nat& k) {
  Nat m = k + 1;
  append(m, 2 * bit_length(m) - 1);  // gamma(m): leading zeros carry no value
}

void BitWriter::append_field(const Nat& subcode) {
  unsigned long blen = bit_length(subcode);
  append_chunk(Nat(blen));
  append(subcode, blen);
}

std::pair<Nat, unsigned long> BitWriter::take() {
  // Balanced merge keeps the concatenation near-linear in total size.
  std::vector<std::pair<Nat, unsigned long>> cur = std::move(parts_);
  parts_.clear();
  if (cur.empty()) return {Nat(0), 0};
  while (cur.size() > 1) {
    std::vector<std::pair<Nat, unsigned long>> next;
    next.reserve(cur.size() / 2 + 1);
    for (size_t i = 0; i + 1 < cur.size(); i += 2) {
      Nat v = cur[i].first;
      mpz_mul_2exp(v.get_mpz_t(), v.get_mpz_t(), cur[i + 1].second);
      v += cur[i + 1].first;
      next.emplace_back(std::move(v), cur[i].second + cur[i + 1].second);
    }
    if (cur.size() % 2) next.push_back(std::move(cur.back()));
    cur = std::move(next);
  }
  return cur[0];
}

BitReader::BitReader(const Nat& code) : suffix_(code), len_(bit_length(code)) {}
BitReader::BitReader(const Nat& value, unsigned long bits) : suffix_(value), len_(bits) {
  if (bit_length(value) > bits) throw DecodeError("field value wider than declared length");
}

Nat BitReader::take(unsigned long bits) {
  if (bits > len_) throw DecodeError("code truncated");
  Nat v = shift_right(suffix_, len_ - bits);
  suffix_ = low_bits(suffix_, len_ - bits);
  len_ -= bits;
  return v;
}

Nat BitReader::read_chunk() {
  unsigned long ones = bit_length(suffix_);
  if (ones == 0) throw DecodeError("chunk: no leading 1 bit");
  unsigned long zeros = len_ - ones;
  if (2 * zeros + 1 > len_) throw DecodeError("chunk truncated");
  Nat m = take(2 * zeros + 1);
  return m - 1;
}

Nat BitReader::read_field() {
  Nat blen_n = read_chunk();
  if (blen_n > 1000000000) throw DecodeError("field length out of range");
  unsigned long blen = blen_n.get_ui();
  Nat v = take(blen);
  if (bit_length(v) != blen) throw DecodeError("field has leading zero");
  return v;
}

void BitReader::expect_done() const {
  if (len_ != 0) throw DecodeError("trailing bits in code");
}

namespace {

constexpr unsigned long kHeaderBits = 4;  // guard 1 + kind 3

void write_header(BitWriter& w, int kind, int tag) {
  w.append(Nat((1 << 6) | (kind << 3) | tag), 7);
}

void encode_term_into(BitWriter& w, const TermPtr& t);

void encode_term_field(BitWriter& w, const TermPtr& t) {
  BitWriter sub;
  encode_term_into(sub, t);
  auto [v, bits] = sub.take();
  (void)bits;
  w.append_field(v);
}

void encode_term_into(BitWriter& w, const TermPtr& t) {
  switch (t->kind) {
    case TermKind::Zero:
      write_header(w, kKindTerm, 0);
      return;
    case TermKind::Succ:
      write_header(w, kKindTerm, 1);
      encode_term_field(w, t->a);
      return;
    case TermKind::Add:
      write_header(w, kKindTerm, 2);
      encode_term_field(w, t->a);
      encode_term_field(w, t->b);
      return;
    case TermKind::Mul:
      write_header(w, kKindTerm, 3);
      encode_term_field(w, t->a);
      encode_term_field(w, t->b);
      return;
    case TermKind::Var:
      write_header(w, kKindTerm, 4);
      w.append_chunk(Nat(t->var));
      return;
    case TermKind::Num:
      write_header(w, kKindTerm, 5);
      w.append_chunk(t->num);
      return;
  }
  throw std::logic_error("unreachable");
}

void encode_formula_into(BitWriter& w, const FormulaPtr& f);

void encode_formula_field(BitWriter& w, const FormulaPtr& f) {
  BitWriter sub;
  encode_formula_into(sub, f);
  auto [v, bits] = sub.take();
  (void)bits;
  w.append_field(v);
}

void encode_formula_into(BitWriter& w, const FormulaPtr& f) {
  switch (f->kind) {
    case FormulaKind::Eq:
      write_header(w, kKindFormula, 0);
      encode_term_field(w, f->s);
      encode_term_field(w, f->t);
      return;
    case FormulaKind::Lt:
      write_header(w, kKindFormula, 1);
      encode_term_field(w, f->s);
      encode_term_field(w, f->t);
      return;
    case FormulaKind::Not:
      write_header(w, kKindFormula, 2);
      encode_formula_field(w, f->f);
      return;
    case FormulaKind::And:
      write_header(w, kKindFormula, 3);
      encode_formula_field(w, f->f);
      encode_formula_field(w, f->g);
      return;
    case FormulaKind::Or:
      write_header(w, kKindFormula, 4);
      encode_formula_field(w, f->f);
      encode_formula_field(w, f->g);
      return;
    case FormulaKind::Implies:
      write_header(w, kKindFormula, 5);
      encode_formula_field(w, f->f);
      encode_formula_field(w, f->g);
      return;
    case FormulaKind::ForAll:
      write_header(w, kKindFormula, 6);
      w.append_chunk(Nat(f->var));
      encode_formula_field(w, f->f);
      return;
    case FormulaKind::Exists:
      write_header(w, kKindFormula, 7);
      w.append_chunk(Nat(f->var));
      encode_formula_field(w, f->f);
      return;
  }
  throw std::logic_error("unreachable");
}

struct Header {
  int kind;
  int tag;
  BitReader body;
};

Header open_code(const Nat& code, int expected_kind) {
  if (bit_length(code) < kHeaderBits + 3) throw DecodeError("code too short");
  BitReader r(code);
  r.take(1);  // guard bit, known to be 1
  int kind = static_cast<int>(r.take(3).get_ui());
  if (kind != expected_kind) throw DecodeError("kind tag mismatch");
  int tag = static_cast<int>(r.take(3).get_ui());
  return {kind, tag, std::move(r)};
}

TermPtr decode_term_reader(Header& h);

TermPtr decode_term_field(BitReader& r) {
  Nat sub = r.read_field();
  return decode_term(sub);
}

FormulaPtr decode_formula_field(BitReader& r) {
  Nat sub = r.read_field();
  return decode_formula(sub);
}

unsigned decode_var_index(BitReader& r) {
  Nat i = r.read_chunk();
  if (i > 1000000000) throw DecodeError("variable index out of range");
  return static_cast<unsigned>(i.get_ui());
}

TermPtr decode_term_reader(Header& h) {
  switch (h.tag) {
    case 0:
      return fol::mk_zero();
    case 1: {
      TermPtr a = decode_term_field(h.body);
      if (a->kind == TermKind::Zero || a->kind == TermKind::Num)
        throw DecodeError("non-canonical succ of a numeral");
      return fol::mk_succ(a);
    }
    case 2: {
      TermPtr a = decode_term_field(h.body);
      TermPtr b = decode_term_field(h.body);
      return fol::mk_add(a, b);
    }
    case 3: {
      TermPtr a = decode_term_field(h.body);
      TermPtr b = decode_term_field(h.body);
      return fol::mk_mul(a, b);
    }
    case 4:
      return fol::mk_var(decode_var_index(h.body));
    case 5: {
      Nat k = h.body.read_chunk();
      if (k == 0) throw DecodeError("num node must be >= 1");
      return fol::numeral(k);
    }
    default:
      throw DecodeError("bad term tag");
  }
}

}  // namespace

Nat encode_term(const TermPtr& t) {
  BitWriter w;
  encode_term_into(w, t);
  return w.take().first;
}

Nat encode_formula(const FormulaPtr& f) {
  BitWriter w;
  encode_formula_into(w, f);
  return w.take().first;
}

TermPtr decode_term(const Nat& code) {
  Header h = open_code(code, kKindTerm);
  TermPtr t = decode_term_reader(h);
  h.body.expect_done();
  return t;
}

FormulaPtr decode_formula(const Nat& code) {
  Header h = open_code(code, kKindFormula);
  FormulaPtr out;
  switch (h.tag) {
    case 0:
    case 1: {
      TermPtr s = decode_term_field(h.body);
      TermPtr t = decode_term_field(h.body);
      out = h.tag == 0 ? fol::mk_eq(s, t) : fol::mk_lt(s, t);
      break;
    }
    case 2:
      out = fol::mk_not(decode_formula_field(h.body));
      break;
    case 3:
    case 4:
    case 5: {
      FormulaPtr a = decode_formula_field(h.body);
      FormulaPtr b = decode_formula_field(h.body);
      out = h.tag == 3 ? fol::mk_and(a, b) : h.tag == 4 ? fol::mk_or(a, b) : fol::mk_implies(a, b);
      break;
    }
    case 6:
    case 7: {
      unsigned v = decode_var_index(h.body);
      FormulaPtr a = decode_formula_field(h.body);
      out = h.tag == 6 ? fol::mk_forall(v, a) : fol::mk_exists(v, a);
      break;
    }
    default:
      throw DecodeError("bad formula tag");
  }
  h.body.expect_done();
  return out;
}

namespace {

Nat encode_entries(int kind, const std::vector<Nat>& entries) {
  BitWriter w;
  w.append(Nat((1 << 3) | kind), 4);
  w.append_chunk(Nat(entries.size()));
  for (const Nat& e : entries) w.append_field(e);
  return w.take().first;
}

std::vector<Nat> decode_entries(int kind, const Nat& code) {
  if (bit_length(code) < kHeaderBits + 1) throw DecodeError("code too short");
  BitReader r(code);
  r.take(1);
  if (static_cast<int>(r.take(3).get_ui()) != kind) throw DecodeError("kind tag mismatch");
  Nat n = r.read_chunk();
  if (n > 10000000) throw DecodeError("sequence length out of range");
  std::vector<Nat> out;
  out.reserve(n.get_ui());
  for (unsigned long i = 0; i < n.get_ui(); ++i) out.push_back(r.read_field());
  r.expect_done();
  return out;
}

}  // namespace

Nat encode_seq(const std::vector<Nat>& entries) { return encode_entries(kKindSeq, entries); }
std::vector<Nat> decode_seq(const Nat& code) { return decode_entries(kKindSeq, code); }

Nat encode_proof_records(const std::vector<Nat>& step_records) {
  return encode_entries(kKindProof, step_records);
}
std::vector<Nat> decode_proof_records(const Nat& code) {
  return decode_entries(kKindProof, code);
}

int code_kind(const Nat& code) {
  unsigned long bits = bit_length(code);
  if (bits < kHeaderBits) return -1;
  return static_cast<int>(shift_right(code, bits - 4).get_ui() & 7);
}

}  // namespace mmk::coding
