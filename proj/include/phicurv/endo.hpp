#pragma once

#include "phicurv/complex.hpp"
#include "phicurv/ring.hpp"

namespace phicurv {

enum class EndoKind { Frobenius, Substitution, Projection };

// Ring endomorphism given by variable images, certified contracting:
// certificate_s is the least s <= s_max with phi^s(x_i) in m^2 + I for
// every i (then phi^(s*i)(m) lies in m^(i+1), so phi is contracting).
struct EndoMap {
  RingPtr ring;
  EndoKind kind = EndoKind::Substitution;
  int frobenius_e = 0;       // for the Frobenius kind
  std::vector<Poly> images;  // one per variable, reduced mod I
  int certificate_s = 0;
  std::vector<Poly> certificate_witness;  // phi^certificate_s images

  std::string describe() const;
};

constexpr int kDefaultCertificateBound = 8;
constexpr int kPushforwardBudget = 4096;
constexpr int kBimodulePowerBudget = 3;

// Validates that the images define an endomorphism of R (images in m, ideal
// preserved) and certifies contraction within s_max; throws NotEndomorphism
// or NotCertifiedContracting otherwise.
EndoMap make_endomorphism(RingPtr ring, std::vector<Poly> images,
                          int s_max = kDefaultCertificateBound);

EndoMap frobenius_endo(RingPtr ring, int e);
EndoMap projection_endo(RingPtr ring);

// phi^e by iterated substitution of the images into themselves.
EndoMap endo_power(const EndoMap& phi, int e);
// outer o inner.
EndoMap compose_endos(const EndoMap& outer, const EndoMap& inner);

Poly endo_apply(const EndoMap& phi, const Poly& f);
Matrix twist_matrix(const Matrix& A, const EndoMap& phi);
// Entrywise twist of a free complex's differentials.
ChainComplex twist_complex(const ChainComplex& C, const EndoMap& phi);

// edim(R / phi(m)R) and a choice of variables y that minimally generate m
// modulo phi(m)R (indices into the ring's variables).
int edim_of(const EndoMap& phi);
std::vector<int> minimal_generators_mod_image(const EndoMap& phi);

struct PushforwardPresentation {
  FinModule module;                     // minimized
  std::vector<std::string> basis_tags;  // the p^(en) sub-p^e monomials
  int raw_frame = 0;                    // frame before minimization
};

// Presentation of F_*^e M: frame blocks indexed by sub-p^e monomials,
// relations obtained by decomposing x^a * (relation) over that basis and
// extracting p^e-th roots of exponents componentwise.
PushforwardPresentation pushforward(const FinModule& M, int e);

// Generators f^(p^e) of I^[q].
std::vector<Poly> frobenius_power_ideal(const PolyRing& R,
                                        const std::vector<Poly>& gens, int e);

// L (x)_R ^phi M: left factor's relations act through phi on the right
// block, the right module structure stays the original one.
FinModule twisted_tensor(const FinModule& L, const FinModule& M,
                         const EndoMap& phi);

// M^(n): iterated bimodule tensor power, left relations acting through
// phi-twisted matrices on the right block.
FinModule bimodule_tensor_power(const FinModule& M, const EndoMap& phi, int n);

// k (x)_R M^(n) through the left structure: adds relations
// phi^n(x_t) * e_j; used for the flat-length identities.
FinModule left_residue_tensor(const FinModule& Mn, const EndoMap& phi_n);

}  // namespace phicurv
