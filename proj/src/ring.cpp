#include "phicurv/ring.hpp"

#include <algorithm>

namespace phicurv {

Matrix Matrix::identity(const PolyRing& R, int n) {
  Matrix m;
  m.rows = n;
  m.cols.resize(n);
  for (int i = 0; i < n; ++i)
    m.cols[i] = SVec{VTerm{mon_one(R.nvars()), i, 1 % R.p}};
  return m;
}

Poly matrix_entry(const PolyRing& R, const Matrix& A, int i, int j) {
  return svec_component(R, A.cols[j], i);
}

Matrix matrix_from_entries(const PolyRing& R,
                           const std::vector<std::vector<Poly>>& rows) {
  Matrix A;
  A.rows = static_cast<int>(rows.size());
  int nc = rows.empty() ? 0 : static_cast<int>(rows[0].size());
  for (const auto& r : rows)
    if (static_cast<int>(r.size()) != nc)
      fail(ErrorCode::BadInput, "ragged matrix");
  A.cols.resize(nc);
  for (int j = 0; j < nc; ++j) {
    SVec col;
    for (int i = 0; i < A.rows; ++i)
      for (const auto& t : rows[i][j].terms)
        col.push_back(VTerm{t.m, i, t.c});
    A.cols[j] = svec_sorted(R, std::move(col));
  }
  return A;
}

Matrix matrix_transpose(const PolyRing& R, const Matrix& A) {
  Matrix T;
  T.rows = A.ncols();
  T.cols.resize(A.rows);
  for (int j = 0; j < A.ncols(); ++j)
    for (const auto& t : A.cols[j])
      T.cols[t.pos].push_back(VTerm{t.m, j, t.c});
  for (auto& c : T.cols) c = svec_sorted(R, std::move(c));
  return T;
}

Matrix matrix_multiply(const PolyRing& R, const Matrix& A, const Matrix& B) {
  if (A.ncols() != B.rows) fail(ErrorCode::BadInput, "matmul shape mismatch");
  Matrix C;
  C.rows = A.rows;
  C.cols.resize(B.ncols());
  for (int j = 0; j < B.ncols(); ++j) {
    SVec acc;
    for (const auto& t : B.cols[j])
      acc = svec_add(R, acc, svec_mul_term(R, A.cols[t.pos], t.m, t.c));
    C.cols[j] = std::move(acc);
  }
  return C;
}

Matrix kron_matrix_identity(const PolyRing& R, const Matrix& A, int n) {
  // block (i,j) entry a_ij placed at rows i*n+t, cols j*n+t
  Matrix K;
  K.rows = A.rows * n;
  K.cols.resize(A.ncols() * n);
  for (int j = 0; j < A.ncols(); ++j)
    for (int t = 0; t < n; ++t) {
      SVec col;
      for (const auto& term : A.cols[j])
        col.push_back(VTerm{term.m, term.pos * n + t, term.c});
      K.cols[j * n + t] = svec_sorted(R, std::move(col));
    }
  return K;
}

Matrix kron_identity_matrix(const PolyRing& R, int n, const Matrix& A) {
  Matrix K;
  K.rows = n * A.rows;
  K.cols.resize(n * A.ncols());
  for (int t = 0; t < n; ++t)
    for (int j = 0; j < A.ncols(); ++j) {
      SVec col;
      for (const auto& term : A.cols[j])
        col.push_back(VTerm{term.m, t * A.rows + term.pos, term.c});
      K.cols[t * A.ncols() + j] = svec_sorted(R, std::move(col));
    }
  return K;
}

Matrix matrix_concat(const Matrix& A, const Matrix& B) {
  if (A.rows != B.rows) fail(ErrorCode::BadInput, "concat shape mismatch");
  Matrix C = A;
  C.cols.insert(C.cols.end(), B.cols.begin(), B.cols.end());
  return C;
}

bool matrix_is_zero(const Matrix& A) {
  for (const auto& c : A.cols)
    if (!c.empty()) return false;
  return true;
}

RingPtr QuotientRing::make(uint32_t p, std::vector<std::string> vars,
                           std::vector<Poly> ideal_gens,
                           std::vector<long> weights) {
  auto ring = std::shared_ptr<QuotientRing>(new QuotientRing());
  ring->base_ = PolyRing::make(p, std::move(vars), std::move(weights));
  const PolyRing& R = ring->base_;

  for (const auto& g : ideal_gens) {
    if (!is_homogeneous(R, g))
      fail(ErrorCode::NonHomogeneousIdeal,
           "ideal generator is not homogeneous: " + to_string(R, g));
    if (!g.is_zero() && constant_coeff(g) != 0)
      fail(ErrorCode::NonHomogeneousIdeal,
           "ideal generator has a constant term");
  }
  ring->ideal_gens_ = std::move(ideal_gens);

  std::vector<SVec> gens;
  for (const auto& g : ring->ideal_gens_)
    if (!g.is_zero()) gens.push_back(svec_from_poly(R, g));
  ring->ideal_gb_ = buchberger(R, gens, 1);
  for (const auto& g : ring->ideal_gb_.gens)
    if (!g.empty() && mon_is_one(g.front().m))
      fail(ErrorCode::NonHomogeneousIdeal, "ideal contains a unit");

  // GB of I + m^2, used for contracting certificates
  std::vector<SVec> m2 = gens;
  for (int i = 0; i < R.nvars(); ++i)
    for (int j = i; j < R.nvars(); ++j) {
      Monomial m = mon_one(R.nvars());
      m[i] += 1;
      m[j] += 1;
      m2.push_back(SVec{VTerm{std::move(m), 0, 1 % p}});
    }
  ring->m2_gb_ = buchberger(R, m2, 1);

  // edim = nvars - rank of the linear parts of the ideal GB
  {
    std::vector<std::vector<uint32_t>> rows;
    for (const auto& g : ring->ideal_gb_.gens) {
      Poly f = svec_component(R, g, 0);
      auto lp = linear_part(R, f);
      bool nonzero = false;
      for (uint32_t c : lp) nonzero |= (c != 0);
      if (nonzero) rows.push_back(lp);
    }
    int rank = 0;
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
          uint32_t f = fp::mul(row[piv], fp::inv(b[piv], p), p);
          for (int i = 0; i < R.nvars(); ++i)
            row[i] = fp::sub(row[i], fp::mul(f, b[i], p), p);
        }
      }
      bool nonzero = false;
      for (uint32_t c : row) nonzero |= (c != 0);
      if (nonzero) {
        basis.push_back(row);
        ++rank;
      }
    }
    ring->edim_ = R.nvars() - rank;
  }

  // dim = largest independent set of variables w.r.t. the leading terms
  {
    const int n = R.nvars();
    std::vector<Monomial> lts;
    for (const auto& g : ring->ideal_gb_.gens)
      if (!g.empty()) lts.push_back(g.front().m);
    int best = 0;
    for (uint32_t mask = 0; mask < (1u << n); ++mask) {
      bool independent = true;
      for (const auto& m : lts) {
        bool supported = true;
        for (int i = 0; i < n; ++i)
          if (m[i] && !(mask >> i & 1)) {
            supported = false;
            break;
          }
        if (supported) {
          independent = false;
          break;
        }
      }
      if (independent) best = std::max(best, __builtin_popcount(mask));
    }
    ring->dim_ = best;
  }

  return ring;
}

RingPtr QuotientRing::make_from_strings(
    uint32_t p, std::vector<std::string> vars,
    const std::vector<std::string>& ideal_gens, std::vector<long> weights) {
  PolyRing R = PolyRing::make(p, vars, weights);
  std::vector<Poly> gens;
  for (const auto& s : ideal_gens) gens.push_back(parse_poly(R, s));
  return make(p, std::move(vars), std::move(gens), std::move(weights));
}

LengthResult QuotientRing::ring_length() const {
  return length_of_quotient(base_, ideal_gb_, 1);
}

Poly QuotientRing::nf(const Poly& f) const {
  SVec v = svec_from_poly(base_, f);
  SVec r = normal_form(base_, v, ideal_gb_);
  return svec_component(base_, r, 0);
}

SVec QuotientRing::nf_vec(const SVec& v) const {
  // componentwise reduction mod I
  SVec out;
  if (v.empty()) return out;
  int maxpos = 0;
  for (const auto& t : v) maxpos = std::max(maxpos, static_cast<int>(t.pos));
  for (int pos = 0; pos <= maxpos; ++pos) {
    Poly f = svec_component(base_, v, pos);
    if (f.is_zero()) continue;
    Poly r = nf(f);
    for (const auto& t : r.terms) out.push_back(VTerm{t.m, pos, t.c});
  }
  return svec_sorted(base_, std::move(out));
}

Matrix QuotientRing::nf_matrix(const Matrix& A) const {
  Matrix B;
  B.rows = A.rows;
  B.cols.reserve(A.cols.size());
  for (const auto& c : A.cols) B.cols.push_back(nf_vec(c));
  return B;
}

bool QuotientRing::in_max_ideal(const Poly& f) const {
  return constant_coeff(nf(f)) == 0;
}

bool QuotientRing::in_m2(const Poly& f) const {
  SVec v = svec_from_poly(base_, f);
  return normal_form(base_, v, m2_gb_).empty();
}

std::vector<int> QuotientRing::minimal_m_generator_indices() const {
  // Pivot variables of the linear parts of I are redundant generators of m.
  const PolyRing& R = base_;
  std::vector<std::vector<uint32_t>> basis;
  for (const auto& g : ideal_gb_.gens) {
    Poly f = svec_component(R, g, 0);
    auto row = linear_part(R, f);
    for (const auto& b : basis) {
      int piv = -1;
      for (int i = 0; i < R.nvars(); ++i)
        if (b[i]) {
          piv = i;
          break;
        }
      if (piv >= 0 && row[piv]) {
        uint32_t fct = fp::mul(row[piv], fp::inv(b[piv], R.p), R.p);
        for (int i = 0; i < R.nvars(); ++i)
          row[i] = fp::sub(row[i], fp::mul(fct, b[i], R.p), R.p);
      }
    }
    bool nonzero = false;
    for (uint32_t c : row) nonzero |= (c != 0);
    if (nonzero) basis.push_back(row);
  }
  std::vector<bool> pivot(R.nvars(), false);
  for (const auto& b : basis)
    for (int i = 0; i < R.nvars(); ++i)
      if (b[i]) {
        pivot[i] = true;
        break;
      }
  std::vector<int> out;
  for (int i = 0; i < R.nvars(); ++i)
    if (!pivot[i]) out.push_back(i);
  return out;
}

GroebnerBasis QuotientRing::module_gb(const std::vector<SVec>& cols,
                                      int rank) const {
  std::vector<SVec> gens = cols;
  for (const auto& g : ideal_gb_.gens) {
    Poly f = svec_component(base_, g, 0);
    for (int i = 0; i < rank; ++i) gens.push_back(svec_from_poly(base_, f, i));
  }
  return buchberger(base_, gens, rank);
}

std::vector<SVec> QuotientRing::syzygies_over(const std::vector<SVec>& cols,
                                              int rank) const {
  std::vector<SVec> gens = cols;
  for (const auto& g : ideal_gb_.gens) {
    Poly f = svec_component(base_, g, 0);
    for (int i = 0; i < rank; ++i) gens.push_back(svec_from_poly(base_, f, i));
  }
  auto syz = syzygies(base_, gens, rank);
  const int nc = static_cast<int>(cols.size());
  std::vector<SVec> out;
  for (auto& s : syz) {
    SVec restricted;
    for (const auto& t : s)
      if (t.pos < nc) restricted.push_back(t);
    restricted = nf_vec(restricted);
    if (!restricted.empty()) out.push_back(std::move(restricted));
  }
  return out;
}

std::string QuotientRing::description() const {
  std::string s = "F_" + std::to_string(base_.p) + "[";
  for (size_t i = 0; i < base_.vars.size(); ++i) {
    if (i) s += ",";
    s += base_.vars[i];
  }
  s += "]";
  bool weighted = false;
  for (long w : base_.weights) weighted |= (w != 1);
  if (weighted) {
    s += " wt(";
    for (size_t i = 0; i < base_.weights.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(base_.weights[i]);
    }
    s += ")";
  }
  if (!ideal_gens_.empty()) {
    s += "/(";
    for (size_t i = 0; i < ideal_gens_.size(); ++i) {
      if (i) s += ", ";
      s += to_string(base_, ideal_gens_[i]);
    }
    s += ")";
  }
  return s;
}

FinModule FinModule::free_module(RingPtr R, int rank, std::string label) {
  FinModule M;
  M.ring = std::move(R);
  M.frame = rank;
  M.label = label.empty() ? ("free^" + std::to_string(rank)) : label;
  return M;
}

FinModule FinModule::residue_field(RingPtr R) {
  FinModule M;
  M.frame = 1;
  const PolyRing& P = R->poly_ring();
  for (int i = 0; i < P.nvars(); ++i) {
    Poly xi = R->nf(poly_var(P, i));
    if (!xi.is_zero()) M.rel.push_back(svec_from_poly(P, xi, 0));
  }
  M.ring = std::move(R);
  M.label = "k";
  return M;
}

FinModule FinModule::cokernel(RingPtr R, int frame, std::vector<SVec> rel,
                              std::string label) {
  FinModule M;
  M.frame = frame;
  for (auto& c : rel) {
    c = R->nf_vec(c);
    if (!c.empty()) M.rel.push_back(std::move(c));
  }
  M.ring = std::move(R);
  M.label = std::move(label);
  return M;
}

FinModule minimal_presentation(const FinModule& M) {
  const QuotientRing& Q = *M.ring;
  const PolyRing& R = Q.poly_ring();
  int frame = M.frame;
  std::vector<SVec> cols;
  for (const auto& c : M.rel) {
    SVec r = Q.nf_vec(c);
    if (!r.empty()) cols.push_back(std::move(r));
  }
  for (;;) {
    // locate a unit pivot, column-major scan
    int pj = -1, pi = -1;
    for (int j = 0; j < static_cast<int>(cols.size()) && pj < 0; ++j)
      for (const auto& t : cols[j])
        if (mon_is_one(t.m)) {
          pj = j;
          pi = t.pos;
          break;
        }
    if (pj < 0) break;
    Poly u = svec_component(R, cols[pj], pi);
    // A -> u*D - C*B over the reduced frame (Gaussian elimination step;
    // scaling by the unit u keeps arithmetic polynomial-exact)
    std::vector<SVec> next;
    for (int j = 0; j < static_cast<int>(cols.size()); ++j) {
      if (j == pj) continue;
      Poly b = svec_component(R, cols[j], pi);  // entry (pi, j)
      SVec col = svec_mul_poly(R, cols[j], u);
      if (!b.is_zero())
        col = svec_add(R, col, svec_mul_poly(R, cols[pj], negate(R, b)));
      // drop row pi and reindex
      SVec dropped;
      for (const auto& t : col) {
        if (t.pos == pi) continue;
        dropped.push_back(
            VTerm{t.m, t.pos > pi ? t.pos - 1 : t.pos, t.c});
      }
      dropped = Q.nf_vec(svec_sorted(R, std::move(dropped)));
      if (!dropped.empty()) next.push_back(std::move(dropped));
    }
    cols = std::move(next);
    --frame;
  }
  FinModule out;
  out.ring = M.ring;
  out.frame = frame;
  out.rel = std::move(cols);
  out.label = M.label;
  return out;
}

bool is_zero_module(const FinModule& M) {
  return minimal_presentation(M).frame == 0;
}

int minimal_generators(const FinModule& M) {
  return minimal_presentation(M).frame;
}

LengthResult module_length(const FinModule& M) {
  if (M.frame == 0) return LengthResult{true, 0};
  GroebnerBasis G = M.ring->module_gb(M.rel, M.frame);
  return length_of_quotient(M.ring->poly_ring(), G, M.frame);
}

GroebnerBasis module_relations_gb(const FinModule& M) {
  return M.ring->module_gb(M.rel, M.frame);
}

FinModule prune_relations(const FinModule& M) {
  const QuotientRing& Q = *M.ring;
  const PolyRing& R = Q.poly_ring();
  std::vector<SVec> cols = M.rel;
  std::sort(cols.begin(), cols.end(), [&](const SVec& a, const SVec& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    for (size_t i = 0; i < a.size(); ++i) {
      int c = svec_term_compare(R.order, a[i], b[i]);
      if (c) return c > 0;
      if (a[i].c != b[i].c) return a[i].c < b[i].c;
    }
    return false;
  });
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t j = 0; j < cols.size(); ++j) {
      std::vector<SVec> others;
      for (size_t l = 0; l < cols.size(); ++l)
        if (l != j) others.push_back(cols[l]);
      GroebnerBasis G = Q.module_gb(others, M.frame);
      if (normal_form(R, cols[j], G).empty()) {
        cols.erase(cols.begin() + j);
        changed = true;
        break;
      }
    }
  }
  FinModule out = M;
  out.rel = std::move(cols);
  return out;
}

std::vector<SVec> prune_span_generators(const QuotientRing& Q,
                                        std::vector<SVec> cols, int rank) {
  const PolyRing& R = Q.poly_ring();
  if (rank == 0) return {};
  std::sort(cols.begin(), cols.end(), [&](const SVec& a, const SVec& b) {
    int c = svec_term_compare(R.order, a.front(), b.front());
    if (c) return c < 0;  // smallest leading term first
    if (a.size() != b.size()) return a.size() < b.size();
    for (size_t i = 0; i < a.size(); ++i) {
      c = svec_term_compare(R.order, a[i], b[i]);
      if (c) return c < 0;
      if (a[i].c != b[i].c) return a[i].c < b[i].c;
    }
    return false;
  });
  IncrementalGB gb(R, rank);
  for (const auto& g : Q.ideal_gb().gens) {
    Poly f = svec_component(R, g, 0);
    for (int i = 0; i < rank; ++i) gb.add(svec_from_poly(R, f, i));
  }
  std::vector<SVec> out;
  for (const auto& c : cols) {
    SVec r = gb.reduce(c);
    if (r.empty()) continue;
    out.push_back(r);
    gb.add(r);
  }
  return out;
}

FinModule tensor_modules(const FinModule& M, const FinModule& N) {
  if (!same_ring(M.ring, N.ring))
    fail(ErrorCode::RingMismatch, "tensor_modules: modules over different rings");
  const PolyRing& R = M.ring->poly_ring();
  FinModule T;
  T.ring = M.ring;
  T.frame = M.frame * N.frame;
  // frame index (i,j) -> i*N.frame + j
  for (const auto& a : M.rel)
    for (int j = 0; j < N.frame; ++j) {
      SVec col;
      for (const auto& t : a)
        col.push_back(VTerm{t.m, t.pos * N.frame + j, t.c});
      T.rel.push_back(svec_sorted(R, std::move(col)));
    }
  for (int i = 0; i < M.frame; ++i)
    for (const auto& b : N.rel) {
      SVec col;
      for (const auto& t : b)
        col.push_back(VTerm{t.m, i * N.frame + t.pos, t.c});
      T.rel.push_back(svec_sorted(R, std::move(col)));
    }
  T.label = M.label + "(x)" + N.label;
  return T;
}

}  // namespace phicurv
