#pragma once

#include "phicurv/ring.hpp"

namespace phicurv {

// Bounded complex of presented terms. Each term is a free frame R^rank
// together with optional relation columns (empty = free term). Differentials
// are frame matrices; consecutive ones compose to zero exactly mod I.
struct ChainComplex {
  RingPtr ring;
  int lo = 0;
  std::vector<int> ranks;    // ranks[d - lo]
  std::vector<Matrix> diffs;  // diffs[i] : C_{lo+i+1} -> C_{lo+i}
  std::vector<Matrix> rels;   // rels[i]: relation columns of term lo+i

  int hi() const { return lo + static_cast<int>(ranks.size()) - 1; }
  bool in_range(int n) const { return n >= lo && n <= hi(); }
  int rank_at(int n) const { return in_range(n) ? ranks[n - lo] : 0; }
  Matrix diff_at(int n) const;  // map C_n -> C_{n-1}; zero outside range
  const Matrix* rels_at(int n) const;
  bool is_free() const;
};

// Validates d o d == 0 (mod I) and shape coherence.
ChainComplex make_complex(RingPtr ring, int lo, std::vector<int> ranks,
                          std::vector<Matrix> diffs,
                          std::vector<Matrix> rels = {});

// M as a complex concentrated in degree 0.
ChainComplex module_as_complex(const FinModule& M);

// Koszul complex K(elements; R) on free terms, degrees 0..#elements.
ChainComplex koszul_complex(RingPtr ring, const std::vector<Poly>& elements);

// K(elements; M): frames tensored with M's frame, M's relations adjoined
// per degree. Errors if some element is not in m.
ChainComplex koszul_complex(RingPtr ring, const std::vector<Poly>& elements,
                            const FinModule& M);

// Total complex with the Koszul sign rule d(a(x)b) = da(x)b + (-1)^|a| a(x)db.
ChainComplex tensor_complexes(const ChainComplex& C, const ChainComplex& D);

ChainComplex shift_complex(const ChainComplex& C, int s);

// Hom(C, R) of a free complex.
ChainComplex dual_complex(const ChainComplex& C);

// H_n(C) presented as a subquotient and minimized.
FinModule homology(const ChainComplex& C, int n);
LengthResult homology_length(const ChainComplex& C, int n);

// Homology lengths for a degree range. Over an artinian ring the terms are
// finite k-spaces, so the lengths come from standard-monomial bases and
// exact F_p rank computations; otherwise each degree goes through the
// subquotient presentation route.
std::vector<LengthResult> homology_lengths(const ChainComplex& C, int lo,
                                           int hi);

// Convenience: H_n(C (x) M) for a free complex C.
FinModule homology(const ChainComplex& C, int n, const FinModule& carrier);

}  // namespace phicurv
