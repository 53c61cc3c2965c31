#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "phicurv/fp.hpp"
#include "phicurv/monomial.hpp"

namespace phicurv {

// Polynomial ring context: F_p[x_1..x_n] with a fixed monomial order and
// positive variable weights (all 1 for the standard grading).
struct PolyRing {
  uint32_t p = 2;
  std::vector<std::string> vars;
  std::vector<long> weights;  // same length as vars, all > 0
  MonomialOrder order;

  int nvars() const { return static_cast<int>(vars.size()); }

  static PolyRing make(uint32_t p, std::vector<std::string> vars,
                       std::vector<long> weights = {});

  bool operator==(const PolyRing& o) const {
    return p == o.p && vars == o.vars && weights == o.weights &&
           order == o.order;
  }
};

struct Term {
  Monomial m;
  uint32_t c;  // in (0, p)
};

// Sparse polynomial: terms sorted descending in the ring's monomial order,
// no zero coefficients stored.
struct Poly {
  std::vector<Term> terms;

  bool is_zero() const { return terms.empty(); }
  const Term& leading() const { return terms.front(); }
  bool operator==(const Poly& o) const;
};

Poly poly_zero();
Poly poly_const(const PolyRing& R, uint32_t c);
Poly poly_var(const PolyRing& R, int i);
Poly poly_term(const PolyRing& R, Monomial m, uint32_t c);

// Builds a canonical Poly from an arbitrary term list (merges, drops zeros).
Poly poly_from_terms(const PolyRing& R, std::vector<Term> ts);

Poly add(const PolyRing& R, const Poly& f, const Poly& g);
Poly sub(const PolyRing& R, const Poly& f, const Poly& g);
Poly negate(const PolyRing& R, const Poly& f);
Poly scale(const PolyRing& R, const Poly& f, uint32_t c);
Poly mul_term(const PolyRing& R, const Poly& f, const Monomial& m, uint32_t c);
Poly multiply(const PolyRing& R, const Poly& f, const Poly& g);
Poly poly_pow(const PolyRing& R, const Poly& f, int64_t e);

// Replaces variable i by images[i]; one image per variable.
Poly substitute(const PolyRing& R, const Poly& f,
                const std::vector<Poly>& images);

// f^(p^e). Over a prime field this equals substitute(f, x_i -> x_i^(p^e)).
Poly frobenius_apply(const PolyRing& R, const Poly& f, int e);

// Coefficient of the constant monomial (the image of f in R/m).
uint32_t constant_coeff(const Poly& f);

// Degree-1 homogeneous part as a dense coefficient vector over the variables.
std::vector<uint32_t> linear_part(const PolyRing& R, const Poly& f);

int64_t poly_weighted_degree(const PolyRing& R, const Poly& f);  // -1 for 0
bool is_homogeneous(const PolyRing& R, const Poly& f);

std::string to_string(const PolyRing& R, const Poly& f);

// Parses the canonical syntax: terms joined by + or -, a term being
// c*x^a*y^b with c omitted when 1 and ^1 omitted. Throws ParseError with
// offset information.
Poly parse_poly(const PolyRing& R, const std::string& text);

}  // namespace phicurv
