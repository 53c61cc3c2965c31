#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include "phicurv/errors.hpp"

namespace phicurv {

// Exponent vector, one entry per ring variable. Exponents are guarded
// against overflow at 2^31 so Frobenius iterates stay exact.
using Monomial = std::vector<int32_t>;

constexpr int64_t kExponentCap = int64_t(1) << 31;

inline int32_t checked_exp(int64_t e) {
  if (e < 0 || e >= kExponentCap)
    fail(ErrorCode::ExponentOverflow, "monomial exponent exceeds 2^31");
  return static_cast<int32_t>(e);
}

inline int64_t total_degree(const Monomial& m) {
  int64_t d = 0;
  for (int32_t e : m) d += e;
  return d;
}

inline int64_t weighted_degree(const Monomial& m, const std::vector<long>& w) {
  int64_t d = 0;
  for (size_t i = 0; i < m.size(); ++i) d += int64_t(m[i]) * w[i];
  return d;
}

inline Monomial mon_one(int nvars) { return Monomial(nvars, 0); }

inline bool mon_is_one(const Monomial& m) {
  for (int32_t e : m)
    if (e) return false;
  return true;
}

inline Monomial mon_mul(const Monomial& a, const Monomial& b) {
  Monomial r(a.size());
  for (size_t i = 0; i < a.size(); ++i)
    r[i] = checked_exp(int64_t(a[i]) + b[i]);
  return r;
}

inline bool mon_divides(const Monomial& a, const Monomial& b) {
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

// b / a, assuming a | b.
inline Monomial mon_div(const Monomial& b, const Monomial& a) {
  Monomial r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = b[i] - a[i];
  return r;
}

inline Monomial mon_lcm(const Monomial& a, const Monomial& b) {
  Monomial r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] > b[i] ? a[i] : b[i];
  return r;
}

inline Monomial mon_pow(const Monomial& a, int64_t e) {
  Monomial r(a.size());
  for (size_t i = 0; i < a.size(); ++i)
    r[i] = checked_exp(int64_t(a[i]) * e);
  return r;
}

// Graded reverse lexicographic order refined by a variable precedence
// permutation: prec[0] is the most significant variable.
struct MonomialOrder {
  std::vector<int> prec;

  static MonomialOrder grevlex(int nvars) {
    MonomialOrder o;
    o.prec.resize(nvars);
    std::iota(o.prec.begin(), o.prec.end(), 0);
    return o;
  }

  // -1: a < b, 0: equal, +1: a > b.
  int compare(const Monomial& a, const Monomial& b) const {
    int64_t da = total_degree(a), db = total_degree(b);
    if (da != db) return da < db ? -1 : 1;
    // Reverse lexicographic tie-break: the last variable (in precedence)
    // where the exponents differ decides, smaller exponent wins.
    for (int i = static_cast<int>(prec.size()) - 1; i >= 0; --i) {
      int v = prec[i];
      if (a[v] != b[v]) return a[v] > b[v] ? -1 : 1;
    }
    return 0;
  }

  bool less(const Monomial& a, const Monomial& b) const {
    return compare(a, b) < 0;
  }

  bool operator==(const MonomialOrder& o) const { return prec == o.prec; }
};

}  // namespace phicurv
