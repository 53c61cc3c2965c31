#include "phicurv/complex.hpp"

#include <algorithm>
#include <map>

namespace phicurv {

Matrix ChainComplex::diff_at(int n) const {
  if (n > lo && n <= hi()) return diffs[n - lo - 1];
  // boundary maps outside the range are zero with the right shape
  return Matrix::zero(rank_at(n - 1), rank_at(n));
}

const Matrix* ChainComplex::rels_at(int n) const {
  if (!in_range(n) || rels.empty()) return nullptr;
  const Matrix& m = rels[n - lo];
  return m.ncols() == 0 ? nullptr : &m;
}

bool ChainComplex::is_free() const {
  for (const auto& m : rels)
    if (m.ncols() != 0) return false;
  return true;
}

ChainComplex make_complex(RingPtr ring, int lo, std::vector<int> ranks,
                          std::vector<Matrix> diffs,
                          std::vector<Matrix> rels) {
  ChainComplex C;
  C.ring = std::move(ring);
  C.lo = lo;
  C.ranks = std::move(ranks);
  C.diffs = std::move(diffs);
  C.rels = std::move(rels);
  size_t len = C.ranks.size();
  if (C.diffs.size() + 1 != len && !(len == 0 && C.diffs.empty()))
    fail(ErrorCode::BadInput, "complex: differential count mismatch");
  if (!C.rels.empty() && C.rels.size() != len)
    fail(ErrorCode::BadInput, "complex: relation count mismatch");
  const PolyRing& R = C.ring->poly_ring();
  for (size_t i = 0; i < C.diffs.size(); ++i) {
    if (C.diffs[i].rows != C.ranks[i] ||
        C.diffs[i].ncols() != C.ranks[i + 1])
      fail(ErrorCode::BadInput, "complex: differential shape mismatch");
  }
  for (size_t i = 0; i < C.rels.size(); ++i)
    if (C.rels[i].ncols() != 0 && C.rels[i].rows != C.ranks[i])
      fail(ErrorCode::BadInput, "complex: relation shape mismatch");
  // d o d = 0: exactly mod I on frames, or mod the target's relations when
  // the term carries some
  for (size_t i = 0; i + 1 < C.diffs.size(); ++i) {
    Matrix prod = matrix_multiply(R, C.diffs[i], C.diffs[i + 1]);
    prod = C.ring->nf_matrix(prod);
    if (matrix_is_zero(prod)) continue;
    const Matrix* rel = C.rels_at(C.lo + static_cast<int>(i));
    if (!rel) fail(ErrorCode::BadInput, "complex: d o d != 0");
    GroebnerBasis G = C.ring->module_gb(rel->cols, C.ranks[i]);
    for (const auto& col : prod.cols)
      if (!normal_form(R, col, G).empty())
        fail(ErrorCode::BadInput, "complex: d o d != 0 modulo relations");
  }
  return C;
}

ChainComplex module_as_complex(const FinModule& M) {
  Matrix rel;
  rel.rows = M.frame;
  rel.cols = M.rel;
  return make_complex(M.ring, 0, {M.frame}, {}, {rel});
}

namespace {

// Subsets of {0..e-1} of size j, as sorted index lists, enumerated in
// ascending bitmask order; index lookup via map from mask to index.
struct SubsetTable {
  int e;
  std::vector<std::vector<uint32_t>> masks;  // masks[j] = subsets of size j

  explicit SubsetTable(int e) : e(e) {
    masks.resize(e + 1);
    for (uint32_t m = 0; m < (1u << e); ++m)
      masks[__builtin_popcount(m)].push_back(m);
  }

  int index_of(int j, uint32_t mask) const {
    const auto& v = masks[j];
    return static_cast<int>(std::lower_bound(v.begin(), v.end(), mask) -
                            v.begin());
  }
};

}  // namespace

ChainComplex koszul_complex(RingPtr ring, const std::vector<Poly>& elements) {
  const PolyRing& R = ring->poly_ring();
  for (const auto& f : elements)
    if (!ring->in_max_ideal(f))
      fail(ErrorCode::ElementNotInMaximalIdeal,
           "koszul element not in the maximal ideal: " + to_string(R, f));
  const int e = static_cast<int>(elements.size());
  if (e > 20) fail(ErrorCode::SizeBudgetExceeded, "koszul width too large");
  SubsetTable tab(e);
  std::vector<int> ranks(e + 1);
  for (int j = 0; j <= e; ++j) ranks[j] = static_cast<int>(tab.masks[j].size());
  std::vector<Matrix> diffs;
  for (int j = 1; j <= e; ++j) {
    Matrix d;
    d.rows = ranks[j - 1];
    for (uint32_t mask : tab.masks[j]) {
      SVec col;
      int sign = 0;
      for (int v = 0; v < e; ++v) {
        if (!(mask >> v & 1)) continue;
        uint32_t sub = mask & ~(1u << v);
        int row = tab.index_of(j - 1, sub);
        uint32_t sgn = (sign % 2 == 0) ? 1 : R.p - 1;
        Poly term = scale(R, ring->nf(elements[v]), sgn);
        for (const auto& t : term.terms)
          col.push_back(VTerm{t.m, row, t.c});
        ++sign;
      }
      d.cols.push_back(svec_sorted(R, std::move(col)));
    }
    diffs.push_back(std::move(d));
  }
  return make_complex(std::move(ring), 0, std::move(ranks), std::move(diffs));
}

ChainComplex koszul_complex(RingPtr ring, const std::vector<Poly>& elements,
                            const FinModule& M) {
  ChainComplex K = koszul_complex(ring, elements);
  return tensor_complexes(K, module_as_complex(M));
}

ChainComplex tensor_complexes(const ChainComplex& C, const ChainComplex& D) {
  if (!same_ring(C.ring, D.ring))
    fail(ErrorCode::RingMismatch, "tensor_complexes: ring mismatch");
  const PolyRing& R = C.ring->poly_ring();
  if (C.ranks.empty() || D.ranks.empty()) {
    ChainComplex Z;
    Z.ring = C.ring;
    return Z;
  }
  const int lo = C.lo + D.lo;
  const int hi = C.hi() + D.hi();

  // row offset of block (i, j) inside degree n = i + j
  auto block_offset = [&](int n, int bi) {
    int off = 0;
    for (int i = C.lo; i < bi; ++i) off += C.rank_at(i) * D.rank_at(n - i);
    return off;
  };

  std::vector<int> ranks;
  for (int n = lo; n <= hi; ++n) {
    int r = 0;
    for (int i = C.lo; i <= C.hi(); ++i) r += C.rank_at(i) * D.rank_at(n - i);
    ranks.push_back(r);
  }

  std::vector<Matrix> diffs;
  for (int n = lo + 1; n <= hi; ++n) {
    Matrix d;
    d.rows = ranks[n - 1 - lo];
    for (int i = C.lo; i <= C.hi(); ++i) {
      int j = n - i;
      int rc = C.rank_at(i), rd = D.rank_at(j);
      if (rc == 0 || rd == 0) continue;
      Matrix dC = C.diff_at(i);  // C_i -> C_{i-1}
      Matrix dD = D.diff_at(j);  // D_j -> D_{j-1}
      int off_left = block_offset(n - 1, i - 1);  // block (i-1, j)
      int off_down = block_offset(n - 1, i);      // block (i, j-1)
      int rd_down = D.rank_at(j - 1);
      uint32_t sgn = (i % 2 == 0) ? 1 : R.p - 1;
      for (int a = 0; a < rc; ++a)
        for (int b = 0; b < rd; ++b) {
          SVec col;
          if (C.rank_at(i - 1) > 0)
            for (const auto& t : dC.cols[a])
              col.push_back(VTerm{t.m, off_left + t.pos * rd + b, t.c});
          if (rd_down > 0)
            for (const auto& t : dD.cols[b])
              col.push_back(VTerm{t.m, off_down + a * rd_down + t.pos,
                                  fp::mul(t.c, sgn, R.p)});
          d.cols.push_back(svec_sorted(R, std::move(col)));
        }
    }
    diffs.push_back(std::move(d));
  }

  std::vector<Matrix> rels;
  bool any_rel = !C.is_free() || !D.is_free();
  if (any_rel) {
    for (int n = lo; n <= hi; ++n) {
      Matrix rel;
      rel.rows = ranks[n - lo];
      for (int i = C.lo; i <= C.hi(); ++i) {
        int j = n - i;
        int rc = C.rank_at(i), rd = D.rank_at(j);
        if (rc == 0 || rd == 0) continue;
        int off = block_offset(n, i);
        if (const Matrix* rc_rel = C.rels_at(i)) {
          for (const auto& relcol : rc_rel->cols)
            for (int b = 0; b < rd; ++b) {
              SVec col;
              for (const auto& t : relcol)
                col.push_back(VTerm{t.m, off + t.pos * rd + b, t.c});
              rel.cols.push_back(svec_sorted(R, std::move(col)));
            }
        }
        if (const Matrix* rd_rel = D.rels_at(j)) {
          for (int a = 0; a < rc; ++a)
            for (const auto& relcol : rd_rel->cols) {
              SVec col;
              for (const auto& t : relcol)
                col.push_back(VTerm{t.m, off + a * rd + t.pos, t.c});
              rel.cols.push_back(svec_sorted(R, std::move(col)));
            }
        }
      }
      rels.push_back(std::move(rel));
    }
  }

  return make_complex(C.ring, lo, std::move(ranks), std::move(diffs),
                      std::move(rels));
}

ChainComplex shift_complex(const ChainComplex& C, int s) {
  ChainComplex S = C;
  S.lo += s;
  if (s % 2 != 0) {
    const PolyRing& R = C.ring->poly_ring();
    for (auto& d : S.diffs)
      for (auto& col : d.cols) col = svec_scale(R, col, R.p - 1);
  }
  return S;
}

ChainComplex dual_complex(const ChainComplex& C) {
  if (!C.is_free())
    fail(ErrorCode::BadInput, "dual_complex requires a free complex");
  const PolyRing& R = C.ring->poly_ring();
  ChainComplex D;
  D.ring = C.ring;
  D.lo = -C.hi();
  for (int n = D.lo; n <= -C.lo; ++n) D.ranks.push_back(C.rank_at(-n));
  for (int n = D.lo + 1; n <= -C.lo; ++n)
    D.diffs.push_back(matrix_transpose(R, C.diff_at(-n + 1)));
  return make_complex(C.ring, D.lo, std::move(D.ranks), std::move(D.diffs));
}

namespace {

std::vector<SVec> collect_relations(const ChainComplex& C, int n) {
  std::vector<SVec> out;
  if (const Matrix* m = C.rels_at(n))
    out.insert(out.end(), m->cols.begin(), m->cols.end());
  return out;
}

// Does every column of A lie in span(rels) + I * frame?
bool vanishes_mod(const QuotientRing& Q, const Matrix& A,
                  const std::vector<SVec>& rels) {
  if (matrix_is_zero(A)) return true;
  GroebnerBasis G = Q.module_gb(rels, A.rows);
  for (const auto& c : A.cols)
    if (!normal_form(Q.poly_ring(), c, G).empty()) return false;
  return true;
}

}  // namespace

FinModule homology(const ChainComplex& C, int n) {
  const RingPtr& ring = C.ring;
  const PolyRing& R = ring->poly_ring();
  if (!C.in_range(n) || C.rank_at(n) == 0)
    return FinModule::free_module(ring, 0, "0");
  const int bn = C.rank_at(n);
  Matrix dn = C.diff_at(n);
  Matrix dn1 = C.diff_at(n + 1);
  std::vector<SVec> s_prev = collect_relations(C, n - 1);
  std::vector<SVec> s_n = collect_relations(C, n);

  bool dn_zero = (C.rank_at(n - 1) == 0) || vanishes_mod(*ring, dn, s_prev);
  if (dn_zero) {
    // induced d_n is zero, so H_n = coker([d_{n+1} | relations])
    std::vector<SVec> rel = s_n;
    for (const auto& c : dn1.cols)
      if (!c.empty()) rel.push_back(c);
    return minimal_presentation(
        FinModule::cokernel(ring, bn, std::move(rel), "H"));
  }

  // kernel generators: {v : d_n v in span(s_prev) + I}
  std::vector<SVec> lead = dn.cols;
  lead.insert(lead.end(), s_prev.begin(), s_prev.end());
  auto syz = ring->syzygies_over(lead, C.rank_at(n - 1));
  std::vector<SVec> Z;
  for (const auto& s : syz) {
    SVec v;
    for (const auto& t : s)
      if (t.pos < bn) v.push_back(t);
    v = ring->nf_vec(v);
    if (!v.empty()) Z.push_back(std::move(v));
  }
  Z = prune_span_generators(*ring, std::move(Z), bn);
  if (Z.empty()) return FinModule::free_module(ring, 0, "0");

  // relations among the classes of Z: {h : Z h in im(d_{n+1}) + span(s_n)}
  std::vector<SVec> combined = Z;
  for (const auto& c : dn1.cols)
    if (!c.empty()) combined.push_back(c);
  combined.insert(combined.end(), s_n.begin(), s_n.end());
  auto syz2 = ring->syzygies_over(combined, bn);
  const int z = static_cast<int>(Z.size());
  std::vector<SVec> rel;
  for (const auto& s : syz2) {
    SVec h;
    for (const auto& t : s)
      if (t.pos < z) h.push_back(t);
    h = ring->nf_vec(h);
    if (!h.empty()) rel.push_back(std::move(h));
  }
  return minimal_presentation(FinModule::cokernel(ring, z, std::move(rel), "H"));
}

namespace {

struct TermBasis {
  GroebnerBasis gb;
  std::vector<std::pair<Monomial, int>> basis;
  std::map<std::pair<Monomial, int>, int> index;
  std::unique_ptr<NormalFormer> nf;
};

TermBasis make_term_basis(const ChainComplex& C, int n) {
  TermBasis tb;
  std::vector<SVec> rel = collect_relations(C, n);
  tb.gb = C.ring->module_gb(rel, std::max(C.rank_at(n), 1));
  tb.nf = std::make_unique<NormalFormer>(C.ring->poly_ring(), tb.gb);
  if (C.rank_at(n) == 0) return tb;
  tb.basis = standard_monomials(C.ring->poly_ring(), tb.gb, C.rank_at(n));
  for (size_t b = 0; b < tb.basis.size(); ++b)
    tb.index[tb.basis[b]] = static_cast<int>(b);
  return tb;
}

// rank of the k-matrix of a frame map between finite-length terms
uint64_t dense_map_rank(const ChainComplex& C, const Matrix& d,
                        const TermBasis& src, const TermBasis& dst) {
  const PolyRing& R = C.ring->poly_ring();
  const uint32_t p = R.p;
  const size_t cols = dst.basis.size();
  if (src.basis.empty() || cols == 0 || matrix_is_zero(d)) return 0;
  if (p == 2) {
    const size_t words = (cols + 63) / 64;
    std::vector<std::vector<uint64_t>> rows;
    std::vector<int> pivots;
    for (const auto& [mon, pos] : src.basis) {
      SVec img = svec_mul_term(R, d.cols[pos], mon, 1);
      img = dst.nf->reduce(img);
      if (img.empty()) continue;
      std::vector<uint64_t> row(words, 0);
      for (const auto& t : img) {
        auto it = dst.index.find({t.m, t.pos});
        if (it == dst.index.end())
          fail(ErrorCode::BadInput, "internal: non-standard expansion term");
        row[it->second / 64] ^= (uint64_t(1) << (it->second % 64));
      }
      for (size_t r = 0; r < rows.size(); ++r)
        if (row[pivots[r] / 64] >> (pivots[r] % 64) & 1)
          for (size_t w = 0; w < words; ++w) row[w] ^= rows[r][w];
      int piv = -1;
      for (size_t w = 0; w < words && piv < 0; ++w)
        if (row[w]) piv = static_cast<int>(w * 64 + __builtin_ctzll(row[w]));
      if (piv < 0) continue;
      rows.push_back(std::move(row));
      pivots.push_back(piv);
    }
    return rows.size();
  }
  std::vector<std::vector<uint32_t>> rows;
  std::vector<int> pivots;
  for (const auto& [mon, pos] : src.basis) {
    SVec img = svec_mul_term(R, d.cols[pos], mon, 1);
    img = dst.nf->reduce(img);
    if (img.empty()) continue;
    std::vector<uint32_t> row(cols, 0);
    for (const auto& t : img) {
      auto it = dst.index.find({t.m, t.pos});
      if (it == dst.index.end())
        fail(ErrorCode::BadInput, "internal: non-standard expansion term");
      row[it->second] = fp::add(row[it->second], t.c, p);
    }
    for (size_t r = 0; r < rows.size(); ++r) {
      uint32_t c = row[pivots[r]];
      if (!c) continue;
      for (size_t i = 0; i < cols; ++i)
        row[i] = fp::sub(row[i], fp::mul(c, rows[r][i], p), p);
    }
    int piv = -1;
    for (size_t i = 0; i < cols && piv < 0; ++i)
      if (row[i]) piv = static_cast<int>(i);
    if (piv < 0) continue;
    uint32_t inv = fp::inv(row[piv], p);
    for (auto& c : row) c = fp::mul(c, inv, p);
    rows.push_back(std::move(row));
    pivots.push_back(piv);
  }
  return rows.size();
}

}  // namespace

std::vector<LengthResult> homology_lengths(const ChainComplex& C, int lo,
                                           int hi) {
  std::vector<LengthResult> out;
  if (lo > hi) return out;
  if (!C.ring->is_artinian()) {
    for (int n = lo; n <= hi; ++n) out.push_back(module_length(homology(C, n)));
    return out;
  }
  // artinian: every term is a finite k-space; dim H = dim - rank d_n - rank d_{n+1}
  std::map<int, TermBasis> bases;
  auto basis_at = [&](int n) -> const TermBasis& {
    auto it = bases.find(n);
    if (it == bases.end()) it = bases.emplace(n, make_term_basis(C, n)).first;
    return it->second;
  };
  for (int n = lo; n <= hi; ++n) {
    if (!C.in_range(n) || C.rank_at(n) == 0) {
      out.push_back(LengthResult{true, 0});
      continue;
    }
    const TermBasis& bn = basis_at(n);
    uint64_t dim = bn.basis.size();
    uint64_t r1 = 0, r2 = 0;
    if (C.rank_at(n - 1) > 0)
      r1 = dense_map_rank(C, C.diff_at(n), bn, basis_at(n - 1));
    if (C.rank_at(n + 1) > 0)
      r2 = dense_map_rank(C, C.diff_at(n + 1), basis_at(n + 1), bn);
    out.push_back(LengthResult{true, dim - r1 - r2});
  }
  return out;
}

LengthResult homology_length(const ChainComplex& C, int n) {
  return homology_lengths(C, n, n)[0];
}

FinModule homology(const ChainComplex& C, int n, const FinModule& carrier) {
  return homology(tensor_complexes(C, module_as_complex(carrier)), n);
}

}  // namespace phicurv
