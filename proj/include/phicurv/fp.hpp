#pragma once

#include <cstdint>

#include "phicurv/errors.hpp"

namespace phicurv {

// Arithmetic in the prime field F_p. Values are residues in [0, p).
namespace fp {

inline uint32_t add(uint32_t a, uint32_t b, uint32_t p) {
  uint32_t s = a + b;
  return s >= p ? s - p : s;
}

inline uint32_t sub(uint32_t a, uint32_t b, uint32_t p) {
  return a >= b ? a - b : a + p - b;
}

inline uint32_t neg(uint32_t a, uint32_t p) { return a == 0 ? 0 : p - a; }

inline uint32_t mul(uint32_t a, uint32_t b, uint32_t p) {
  return static_cast<uint32_t>((static_cast<uint64_t>(a) * b) % p);
}

inline uint32_t pow(uint32_t a, uint64_t e, uint32_t p) {
  uint32_t r = 1 % p;
  while (e) {
    if (e & 1) r = mul(r, a, p);
    a = mul(a, a, p);
    e >>= 1;
  }
  return r;
}

// Inverse by Fermat; p prime, a != 0.
inline uint32_t inv(uint32_t a, uint32_t p) {
  if (a == 0) fail(ErrorCode::BadInput, "division by zero in F_p");
  return pow(a, p - 2, p);
}

inline bool is_prime(uint32_t p) {
  if (p < 2) return false;
  for (uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

}  // namespace fp

}  // namespace phicurv
