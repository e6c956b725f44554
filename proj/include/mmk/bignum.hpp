#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <functional>
#include <vector>

namespace mmk {

// Arbitrary-precision natural number. Invariant: values are never negative.
using Nat = mpz_class;

// bit_length(0) = 0, otherwise floor(log2 n) + 1.
inline unsigned long bit_length(const Nat& n) {
  if (n == 0) return 0;
  return mpz_sizeinbase(n.get_mpz_t(), 2);
}

inline Nat pow2(unsigned long k) {
  Nat r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, k);
  return r;
}

// n >> k and n mod 2^k.
inline Nat shift_right(const Nat& n, unsigned long k) {
  Nat r;
  mpz_fdiv_q_2exp(r.get_mpz_t(), n.get_mpz_t(), k);
  return r;
}

inline Nat low_bits(const Nat& n, unsigned long k) {
  Nat r;
  mpz_fdiv_r_2exp(r.get_mpz_t(), n.get_mpz_t(), k);
  return r;
}

struct NatHash {
  size_t operator()(const Nat& n) const {
    const mp_limb_t* limbs = mpz_limbs_read(n.get_mpz_t());
    size_t count = mpz_size(n.get_mpz_t());
    size_t h = 0xcbf29ce484222325ull;
    for (size_t i = 0; i < count; ++i) {
      h ^= static_cast<size_t>(limbs[i]);
      h *= 0x100000001b3ull;
    }
    return h;
  }
};

struct NatVecHash {
  size_t operator()(const std::vector<Nat>& v) const {
    NatHash h;
    size_t acc = v.size();
    for (const auto& n : v) acc = acc * 0x9e3779b97f4a7c15ull + h(n);
    return acc;
  }
};

}  // namespace mmk
