#include "phicurv/endo.hpp"

#include <algorithm>

namespace phicurv {

std::string EndoMap::describe() const {
  switch (kind) {
    case EndoKind::Frobenius:
      return "frobenius(" + std::to_string(frobenius_e) + ")";
    case EndoKind::Projection:
      return "projection";
    case EndoKind::Substitution: {
      std::string s = "images [";
      const PolyRing& R = ring->poly_ring();
      for (size_t i = 0; i < images.size(); ++i) {
        if (i) s += ", ";
        s += to_string(R, images[i]);
      }
      return s + "]";
    }
  }
  return "?";
}

namespace {

std::vector<Poly> compose_images(const PolyRing& R, const QuotientRing& Q,
                                 const std::vector<Poly>& outer,
                                 const std::vector<Poly>& inner) {
  // (outer o inner)(x_i) = outer applied to inner(x_i)
  std::vector<Poly> out;
  out.reserve(inner.size());
  for (const auto& f : inner) out.push_back(Q.nf(substitute(R, f, outer)));
  return out;
}

}  // namespace

EndoMap make_endomorphism(RingPtr ring, std::vector<Poly> images, int s_max) {
  const PolyRing& R = ring->poly_ring();
  if (static_cast<int>(images.size()) != R.nvars())
    fail(ErrorCode::VariableCountMismatch,
         "endomorphism needs one image per variable");
  for (auto& f : images) f = ring->nf(f);
  for (const auto& f : images)
    if (constant_coeff(f) != 0)
      fail(ErrorCode::NotEndomorphism,
           "image not in the maximal ideal: " + to_string(R, f));
  // the map descends to R iff every ideal generator maps into I
  for (const auto& g : ring->ideal_gb().gens) {
    Poly gp = svec_component(R, g, 0);
    if (!ring->in_ideal(substitute(R, gp, images)))
      fail(ErrorCode::NotEndomorphism,
           "ideal not preserved by the images (fails on " +
               to_string(R, gp) + ")");
  }

  EndoMap phi;
  phi.kind = EndoKind::Substitution;
  phi.images = std::move(images);

  // contracting certificate: least s with phi^s(x_i) in m^2 + I for all i
  std::vector<Poly> pow = phi.images;
  int s = 0;
  bool ok = false;
  for (s = 1; s <= s_max; ++s) {
    bool all = true;
    for (const auto& f : pow)
      if (!ring->in_m2(f)) {
        all = false;
        break;
      }
    if (all) {
      ok = true;
      break;
    }
    pow = compose_images(R, *ring, phi.images, pow);
    for (auto& f : pow) f = ring->nf(f);
  }
  if (!ok)
    fail(ErrorCode::NotCertifiedContracting,
         "no s <= " + std::to_string(s_max) +
             " with phi^s(m) in m^2; map not certified contracting");
  phi.certificate_s = s;
  phi.certificate_witness = pow;
  phi.ring = std::move(ring);
  return phi;
}

EndoMap frobenius_endo(RingPtr ring, int e) {
  if (e < 1) fail(ErrorCode::BadInput, "frobenius power must be >= 1");
  const PolyRing& R = ring->poly_ring();
  std::vector<Poly> images;
  for (int i = 0; i < R.nvars(); ++i)
    images.push_back(ring->nf(frobenius_apply(R, poly_var(R, i), e)));
  EndoMap phi = make_endomorphism(std::move(ring), std::move(images));
  phi.kind = EndoKind::Frobenius;
  phi.frobenius_e = e;
  return phi;
}

EndoMap projection_endo(RingPtr ring) {
  const PolyRing& R = ring->poly_ring();
  std::vector<Poly> images(R.nvars(), poly_zero());
  EndoMap phi = make_endomorphism(std::move(ring), std::move(images));
  phi.kind = EndoKind::Projection;
  return phi;
}

EndoMap endo_power(const EndoMap& phi, int e) {
  if (e < 1) fail(ErrorCode::BadInput, "endomorphism power must be >= 1");
  if (e == 1) return phi;
  if (phi.kind == EndoKind::Frobenius)
    return frobenius_endo(phi.ring, phi.frobenius_e * e);
  const PolyRing& R = phi.ring->poly_ring();
  std::vector<Poly> images = phi.images;
  for (int i = 1; i < e; ++i)
    images = compose_images(R, *phi.ring, phi.images, images);
  EndoMap out = make_endomorphism(phi.ring, std::move(images));
  out.kind = phi.kind;
  return out;
}

EndoMap compose_endos(const EndoMap& outer, const EndoMap& inner) {
  if (!same_ring(outer.ring, inner.ring))
    fail(ErrorCode::RingMismatch, "compose_endos: ring mismatch");
  const PolyRing& R = outer.ring->poly_ring();
  auto images = compose_images(R, *outer.ring, outer.images, inner.images);
  EndoMap out = make_endomorphism(outer.ring, std::move(images));
  if (outer.kind == EndoKind::Frobenius && inner.kind == EndoKind::Frobenius) {
    out.kind = EndoKind::Frobenius;
    out.frobenius_e = outer.frobenius_e + inner.frobenius_e;
  }
  return out;
}

Poly endo_apply(const EndoMap& phi, const Poly& f) {
  return phi.ring->nf(substitute(phi.ring->poly_ring(), f, phi.images));
}

Matrix twist_matrix(const Matrix& A, const EndoMap& phi) {
  const PolyRing& R = phi.ring->poly_ring();
  Matrix B;
  B.rows = A.rows;
  B.cols.reserve(A.cols.size());
  for (const auto& col : A.cols) {
    SVec out;
    int maxpos = -1;
    for (const auto& t : col) maxpos = std::max(maxpos, (int)t.pos);
    for (int pos = 0; pos <= maxpos; ++pos) {
      Poly f = svec_component(R, col, pos);
      if (f.is_zero()) continue;
      Poly g = endo_apply(phi, f);
      for (const auto& t : g.terms) out.push_back(VTerm{t.m, pos, t.c});
    }
    B.cols.push_back(svec_sorted(R, std::move(out)));
  }
  return B;
}

ChainComplex twist_complex(const ChainComplex& C, const EndoMap& phi) {
  if (!C.is_free())
    fail(ErrorCode::BadInput, "twist_complex requires a free complex");
  std::vector<Matrix> diffs;
  diffs.reserve(C.diffs.size());
  for (const auto& d : C.diffs) diffs.push_back(twist_matrix(d, phi));
  return make_complex(C.ring, C.lo, C.ranks, std::move(diffs));
}

namespace {

// Row space of the linear parts of {ideal GB gens} + {images}; the
// non-pivot variables represent a basis of m / (m^2 + phi(m)R).
std::vector<bool> pivot_variables(const EndoMap& phi) {
  const QuotientRing& Q = *phi.ring;
  const PolyRing& R = Q.poly_ring();
  std::vector<std::vector<uint32_t>> rows;
  for (const auto& g : Q.ideal_gb().gens)
    rows.push_back(linear_part(R, svec_component(R, g, 0)));
  for (const auto& f : phi.images) rows.push_back(linear_part(R, f));
  std::vector<std::vector<uint32_t>> basis;
  for (auto row : rows) {
    for (const auto& b : basis) {
      int piv = -1;
      for (int i = 0; i < R.nvars(); ++i)
        if (b[i]) {
          piv = i;
          break;
        }
      if (piv >= 0 && row[piv]) {
        uint32_t f = fp::mul(row[piv], fp::inv(b[piv], R.p), R.p);
        for (int i = 0; i < R.nvars(); ++i)
          row[i] = fp::sub(row[i], fp::mul(f, b[i], R.p), R.p);
      }
    }
    bool nonzero = false;
    for (uint32_t c : row) nonzero |= (c != 0);
    if (nonzero) basis.push_back(std::move(row));
  }
  std::vector<bool> pivot(R.nvars(), false);
  for (const auto& b : basis)
    for (int i = 0; i < R.nvars(); ++i)
      if (b[i]) {
        pivot[i] = true;
        break;
      }
  return pivot;
}

}  // namespace

int edim_of(const EndoMap& phi) {
  auto pivot = pivot_variables(phi);
  int e = 0;
  for (bool b : pivot)
    if (!b) ++e;
  return e;
}

std::vector<int> minimal_generators_mod_image(const EndoMap& phi) {
  auto pivot = pivot_variables(phi);
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(pivot.size()); ++i)
    if (!pivot[i]) out.push_back(i);
  return out;
}

PushforwardPresentation pushforward(const FinModule& M, int e) {
  const QuotientRing& Q = *M.ring;
  const PolyRing& R = Q.poly_ring();
  if (e < 1) fail(ErrorCode::BadInput, "pushforward power must be >= 1");
  int64_t q = 1;
  for (int i = 0; i < e; ++i) {
    q *= R.p;
    if (q > kPushforwardBudget)
      fail(ErrorCode::SizeBudgetExceeded, "p^e too large for pushforward");
  }
  const int n = R.nvars();
  int64_t blocks = 1;
  for (int i = 0; i < n; ++i) {
    blocks *= q;
    if (blocks * std::max(M.frame, 1) > kPushforwardBudget)
      fail(ErrorCode::SizeBudgetExceeded,
           "pushforward frame exceeds the size budget");
  }

  // sub-q monomials, odometer order (variable 0 fastest)
  std::vector<Monomial> subq;
  Monomial cur = mon_one(n);
  for (;;) {
    subq.push_back(cur);
    int i = 0;
    while (i < n) {
      if (++cur[i] < q) break;
      cur[i] = 0;
      ++i;
    }
    if (i == n) break;
  }
  auto block_index = [&](const Monomial& b) {
    int64_t idx = 0, stride = 1;
    for (int i = 0; i < n; ++i) {
      idx += b[i] * stride;
      stride *= q;
    }
    return static_cast<int>(idx);
  };

  const int frame = static_cast<int>(blocks) * M.frame;

  // relations to decompose: the module's own plus I * frame
  std::vector<SVec> source = M.rel;
  for (const auto& g : Q.ideal_gb().gens) {
    Poly f = svec_component(R, g, 0);
    for (int i = 0; i < M.frame; ++i)
      source.push_back(svec_from_poly(R, f, i));
  }

  std::vector<SVec> rel;
  for (const auto& col : source)
    for (const auto& a : subq) {
      SVec out;
      for (const auto& t : col) {
        Monomial m = mon_mul(t.m, a);
        Monomial b(n), root(n);
        for (int i = 0; i < n; ++i) {
          b[i] = m[i] % q;
          root[i] = checked_exp(m[i] / q);
        }
        int pos = block_index(b) * M.frame + t.pos;
        out.push_back(VTerm{std::move(root), pos, t.c});
      }
      rel.push_back(svec_sorted(R, std::move(out)));
    }

  PushforwardPresentation out;
  out.raw_frame = frame;
  for (const auto& a : subq) out.basis_tags.push_back(to_string(R, poly_term(R, a, 1)));
  out.module = minimal_presentation(
      FinModule::cokernel(M.ring, frame, std::move(rel),
                          "F_*^" + std::to_string(e) + "(" + M.label + ")"));
  return out;
}

std::vector<Poly> frobenius_power_ideal(const PolyRing& R,
                                        const std::vector<Poly>& gens, int e) {
  std::vector<Poly> out;
  out.reserve(gens.size());
  for (const auto& g : gens) out.push_back(frobenius_apply(R, g, e));
  return out;
}

namespace {

// one step: M (x) N where N carries the left structure through psi
FinModule bimodule_step(const FinModule& M, const FinModule& N,
                        const EndoMap& psi) {
  const PolyRing& R = M.ring->poly_ring();
  FinModule T;
  T.ring = M.ring;
  T.frame = M.frame * N.frame;
  for (const auto& a : M.rel) {
    // left relations act through psi on the right block
    for (int j = 0; j < N.frame; ++j) {
      SVec col;
      int maxpos = -1;
      for (const auto& t : a) maxpos = std::max(maxpos, (int)t.pos);
      for (int pos = 0; pos <= maxpos; ++pos) {
        Poly f = svec_component(R, a, pos);
        if (f.is_zero()) continue;
        Poly g = endo_apply(psi, f);
        for (const auto& t : g.terms)
          col.push_back(VTerm{t.m, pos * N.frame + j, t.c});
      }
      T.rel.push_back(svec_sorted(R, std::move(col)));
    }
  }
  for (int i = 0; i < M.frame; ++i)
    for (const auto& b : N.rel) {
      SVec col;
      for (const auto& t : b)
        col.push_back(VTerm{t.m, i * N.frame + t.pos, t.c});
      T.rel.push_back(svec_sorted(R, std::move(col)));
    }
  return T;
}

}  // namespace

FinModule twisted_tensor(const FinModule& L, const FinModule& M,
                         const EndoMap& phi) {
  if (!same_ring(L.ring, M.ring) || !same_ring(L.ring, phi.ring))
    fail(ErrorCode::RingMismatch, "twisted_tensor: ring mismatch");
  FinModule T = bimodule_step(L, M, phi);
  T.label = L.label + "(x)^phi" + M.label;
  return T;
}

FinModule bimodule_tensor_power(const FinModule& M, const EndoMap& phi,
                                int n) {
  if (!same_ring(M.ring, phi.ring))
    fail(ErrorCode::RingMismatch, "bimodule_tensor_power: ring mismatch");
  if (n < 1) fail(ErrorCode::BadInput, "tensor power must be >= 1");
  if (n > kBimodulePowerBudget)
    fail(ErrorCode::SizeBudgetExceeded,
         "bimodule tensor power beyond the desk-scale budget");
  FinModule T = M;
  for (int j = 1; j < n; ++j) T = bimodule_step(M, T, endo_power(phi, j));
  T.label = M.label + "^(" + std::to_string(n) + ")";
  return T;
}

FinModule left_residue_tensor(const FinModule& Mn, const EndoMap& phi_n) {
  const PolyRing& R = Mn.ring->poly_ring();
  FinModule T = Mn;
  for (const auto& img : phi_n.images) {
    if (img.is_zero()) continue;  // zero images add nothing
    for (int j = 0; j < Mn.frame; ++j)
      T.rel.push_back(svec_from_poly(R, img, j));
  }
  T.label = "k(x)" + Mn.label;
  return T;
}

}  // namespace phicurv
