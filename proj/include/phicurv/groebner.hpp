#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "phicurv/poly.hpp"

namespace phicurv {

// Term of a free-module vector: monomial times basis element `pos`.
struct VTerm {
  Monomial m;
  int32_t pos;
  uint32_t c;

  bool operator==(const VTerm& o) const {
    return pos == o.pos && c == o.c && m == o.m;
  }
};

// Sparse vector in P^rank, terms sorted descending in position-over-term
// order (e_0 > e_1 > ..., ties broken by the monomial order).
using SVec = std::vector<VTerm>;

// Dense view used at module boundaries.
struct FreeModuleVector {
  int rank = 0;
  std::vector<Poly> comps;
};

int svec_term_compare(const MonomialOrder& order, const VTerm& a,
                      const VTerm& b);
SVec svec_sorted(const PolyRing& R, SVec v);
SVec svec_add(const PolyRing& R, const SVec& a, const SVec& b);
SVec svec_scale(const PolyRing& R, const SVec& v, uint32_t c);
SVec svec_mul_term(const PolyRing& R, const SVec& v, const Monomial& m,
                   uint32_t c);
SVec svec_mul_poly(const PolyRing& R, const SVec& v, const Poly& f);
SVec svec_from_vector(const PolyRing& R, const FreeModuleVector& v);
FreeModuleVector svec_to_vector(const SVec& v, int rank);
SVec svec_from_poly(const PolyRing& R, const Poly& f, int pos = 0);
Poly svec_component(const PolyRing& R, const SVec& v, int pos);

struct GroebnerBasis {
  int rank = 1;
  MonomialOrder order;
  std::vector<SVec> gens;  // monic; when reduced: sorted, fully interreduced
  bool reduced = false;
};

// Reduced Groebner basis of the submodule of P^rank generated by `gens`.
// Deterministic: normal selection strategy, first-index tie-break.
GroebnerBasis buchberger(const PolyRing& R, const std::vector<SVec>& gens,
                         int rank);

// Full normal form of v against G: no term of the result is divisible by a
// leading term of G, and v - result lies in the span of G.
SVec normal_form(const PolyRing& R, const SVec& v, const GroebnerBasis& G);

// Reusable normal-form context: builds the divisor index for G once.
class NormalFormer {
 public:
  NormalFormer(const PolyRing& R, const GroebnerBasis& G);
  ~NormalFormer();
  NormalFormer(NormalFormer&&) noexcept;
  SVec reduce(const SVec& v) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Generators of the syzygy module of `gens` inside P^#gens, computed by
// Buchberger with Schreyer tracking. Every returned s satisfies
// sum_j s[j] * gens[j] = 0 exactly.
std::vector<SVec> syzygies(const PolyRing& R, const std::vector<SVec>& gens,
                           int rank);

// Growing Groebner basis: supports interleaved insertions and membership
// tests; after each add the basis is completed, so reduce() is a true
// normal form against the span of everything added so far.
class IncrementalGB {
 public:
  IncrementalGB(const PolyRing& R, int rank);
  ~IncrementalGB();
  IncrementalGB(IncrementalGB&&) noexcept;
  void add(const SVec& v);
  SVec reduce(const SVec& v) const;
  bool contains(const SVec& v) const { return reduce(v).empty(); }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct LengthResult {
  bool finite = false;
  uint64_t value = 0;
};

// Counts standard monomials of P^rank modulo the leading-term module of G
// (G a Groebner basis). Finite iff each (position, variable) pair has a pure
// power among the leading terms.
LengthResult length_of_quotient(const PolyRing& R, const GroebnerBasis& G,
                                int rank);

// Standard monomial basis (monomial, position), sorted deterministically.
// Only valid when the quotient is finite.
std::vector<std::pair<Monomial, int>> standard_monomials(
    const PolyRing& R, const GroebnerBasis& G, int rank);

}  // namespace phicurv
