#include "oracle.hpp"

#include <algorithm>

namespace phicurv::testoracle {

namespace {

std::vector<Monomial> monomials_of_degree(int nvars, int d) {
  std::vector<Monomial> out;
  Monomial cur(nvars, 0);
  cur[0] = d;
  for (;;) {
    out.push_back(cur);
    int i = 0;
    while (i < nvars - 1 && cur[i] == 0) ++i;
    if (i == nvars - 1) break;
    int32_t v = cur[i];
    cur[i] = 0;
    cur[0] = v - 1;
    cur[i + 1] += 1;
  }
  return out;
}

}  // namespace

// row space in reduced row echelon form over F_p
struct DenseOracle::Span {
  uint32_t p = 2;
  std::vector<std::vector<uint32_t>> rows;
  std::vector<int> pivots;

  explicit Span(uint32_t p) : p(p) {}

  void reduce(std::vector<uint32_t>& v) const {
    for (size_t r = 0; r < rows.size(); ++r) {
      uint32_t c = v[pivots[r]];
      if (!c) continue;
      for (size_t i = 0; i < v.size(); ++i)
        v[i] = fp::sub(v[i], fp::mul(c, rows[r][i], p), p);
    }
  }

  // returns true when v was outside the span (and extends it)
  bool add(std::vector<uint32_t> v) {
    reduce(v);
    int piv = -1;
    for (size_t i = 0; i < v.size(); ++i)
      if (v[i]) {
        piv = static_cast<int>(i);
        break;
      }
    if (piv < 0) return false;
    uint32_t inv = fp::inv(v[piv], p);
    for (auto& c : v) c = fp::mul(c, inv, p);
    // clear this pivot from the existing rows
    for (size_t r = 0; r < rows.size(); ++r) {
      uint32_t c = rows[r][piv];
      if (!c) continue;
      for (size_t i = 0; i < v.size(); ++i)
        rows[r][i] = fp::sub(rows[r][i], fp::mul(c, v[i], p), p);
    }
    rows.push_back(std::move(v));
    pivots.push_back(piv);
    return true;
  }

  size_t rank() const { return rows.size(); }
};

struct DenseOracle::Piece {
  std::vector<Monomial> mons;
  std::map<Monomial, int> index;
  std::vector<std::vector<uint32_t>> ideal_rref;
  std::vector<int> ideal_pivots;
  std::vector<int> basis;        // non-pivot monomial indices (coset basis)
  std::vector<int> mon_to_basis;  // -1 for pivot columns
};

DenseOracle::DenseOracle(RingPtr ring, int max_degree)
    : ring_(std::move(ring)), max_degree_(max_degree) {
  const PolyRing& R = ring_->poly_ring();
  for (long w : R.weights)
    if (w != 1) fail(ErrorCode::BadInput, "dense oracle: standard grading only");
  const uint32_t p = R.p;
  pieces_.resize(max_degree_ + 1);
  for (int d = 0; d <= max_degree_; ++d) {
    Piece& pc = pieces_[d];
    pc.mons = monomials_of_degree(R.nvars(), d);
    for (size_t i = 0; i < pc.mons.size(); ++i)
      pc.index[pc.mons[i]] = static_cast<int>(i);
    Span span(p);
    for (const auto& g : ring_->ideal_generators()) {
      if (g.is_zero()) continue;
      int64_t dg = total_degree(g.terms.front().m);
      if (dg > d) continue;
      for (const auto& u : monomials_of_degree(R.nvars(), d - static_cast<int>(dg))) {
        Poly prod = mul_term(R, g, u, 1);
        std::vector<uint32_t> row(pc.mons.size(), 0);
        for (const auto& t : prod.terms) row[pc.index.at(t.m)] = t.c;
        span.add(std::move(row));
      }
    }
    pc.ideal_rref = span.rows;
    pc.ideal_pivots = span.pivots;
    pc.mon_to_basis.assign(pc.mons.size(), -1);
    std::vector<bool> is_pivot(pc.mons.size(), false);
    for (int piv : pc.ideal_pivots) is_pivot[piv] = true;
    for (size_t i = 0; i < pc.mons.size(); ++i)
      if (!is_pivot[i]) {
        pc.mon_to_basis[i] = static_cast<int>(pc.basis.size());
        pc.basis.push_back(static_cast<int>(i));
      }
  }
}

DenseOracle::~DenseOracle() = default;

const DenseOracle::Piece& DenseOracle::piece(int d) const {
  if (d < 0 || d > max_degree_)
    fail(ErrorCode::BadInput, "dense oracle: degree out of range");
  return pieces_[d];
}

int DenseOracle::dim_piece(int d) const {
  if (d < 0) return 0;
  return static_cast<int>(piece(d).basis.size());
}

std::vector<uint32_t> DenseOracle::project(int d, const Poly& f) const {
  const PolyRing& R = ring_->poly_ring();
  const Piece& pc = piece(d);
  std::vector<uint32_t> full(pc.mons.size(), 0);
  for (const auto& t : f.terms) {
    if (total_degree(t.m) != d)
      fail(ErrorCode::BadInput, "dense oracle: inhomogeneous projection");
    full[pc.index.at(t.m)] = fp::add(full[pc.index.at(t.m)], t.c, R.p);
  }
  for (size_t r = 0; r < pc.ideal_rref.size(); ++r) {
    uint32_t c = full[pc.ideal_pivots[r]];
    if (!c) continue;
    for (size_t i = 0; i < full.size(); ++i)
      full[i] = fp::sub(full[i], fp::mul(c, pc.ideal_rref[r][i], R.p), R.p);
  }
  std::vector<uint32_t> out(pc.basis.size(), 0);
  for (size_t i = 0; i < pc.mons.size(); ++i)
    if (full[i]) out[pc.mon_to_basis[i]] = full[i];
  return out;
}

std::vector<int64_t> DenseOracle::betti_of_k(int depth) {
  const PolyRing& R = ring_->poly_ring();
  const uint32_t p = R.p;
  const int n = R.nvars();

  // current differential: columns with polynomial entries, one generator
  // degree per source column, target generator degrees per row
  struct Map {
    std::vector<int> tgt_deg;
    std::vector<int> src_deg;
    std::vector<std::vector<Poly>> cols;  // cols[j][i]
  };
  Map cur;
  cur.tgt_deg = {0};
  for (int v = 0; v < n; ++v) {
    cur.src_deg.push_back(1);
    cur.cols.push_back({poly_var(R, v)});
  }

  std::vector<int64_t> betti{1};
  for (int step = 1; step <= depth; ++step) {
    betti.push_back(static_cast<int64_t>(cur.cols.size()));
    if (step == depth) break;
    // free-module piece coordinates at degree d: (gen j, basis monomial)
    auto offsets_at = [&](const std::vector<int>& degs, int d) {
      std::vector<int> off(degs.size() + 1, 0);
      for (size_t j = 0; j < degs.size(); ++j) {
        int dd = d - degs[j];
        off[j + 1] = off[j] + (dd >= 0 && dd <= max_degree_ ? dim_piece(dd) : 0);
      }
      return off;
    };

    // kernel bases per degree, kept for the m*K spans
    std::map<int, std::vector<std::vector<uint32_t>>> kernels;
    Map next;
    next.tgt_deg = cur.src_deg;

    for (int d = 0; d <= max_degree_; ++d) {
      auto src_off = offsets_at(cur.src_deg, d);
      auto tgt_off = offsets_at(cur.tgt_deg, d);
      int src_dim = src_off.back(), tgt_dim = tgt_off.back();
      if (src_dim == 0) continue;
      // dense matrix of the map at degree d
      std::vector<std::vector<uint32_t>> A(
          tgt_dim, std::vector<uint32_t>(src_dim, 0));
      for (size_t j = 0; j < cur.cols.size(); ++j) {
        int dj = d - cur.src_deg[j];
        if (dj < 0 || dj > max_degree_) continue;
        const Piece& pj = piece(dj);
        for (size_t b = 0; b < pj.basis.size(); ++b) {
          const Monomial& u = pj.mons[pj.basis[b]];
          int col = src_off[j] + static_cast<int>(b);
          for (size_t i = 0; i < cur.tgt_deg.size(); ++i) {
            const Poly& entry = cur.cols[j][i];
            if (entry.is_zero()) continue;
            int di = d - cur.tgt_deg[i];
            if (di < 0) continue;
            Poly prod = mul_term(R, entry, u, 1);
            auto coords = project(di, prod);
            for (size_t t = 0; t < coords.size(); ++t)
              if (coords[t])
                A[tgt_off[i] + t][col] =
                    fp::add(A[tgt_off[i] + t][col], coords[t], p);
          }
        }
      }
      // kernel via RREF on the columns
      Span rowspan(p);
      std::vector<std::vector<uint32_t>> ker;
      {
        // gaussian elimination tracking column operations
        std::vector<std::vector<uint32_t>> mat = A;
        std::vector<std::vector<uint32_t>> track(
            src_dim, std::vector<uint32_t>(src_dim, 0));
        for (int j = 0; j < src_dim; ++j) track[j][j] = 1;
        std::vector<bool> used_row(tgt_dim, false);
        for (int j = 0; j < src_dim; ++j) {
          // reduce column j by previous pivots
          for (int jj = 0; jj < j; ++jj) {
            int pr = -1;
            for (int i = 0; i < tgt_dim; ++i)
              if (mat[i][jj]) {
                pr = i;
                break;
              }
            if (pr < 0) continue;
            uint32_t c = fp::mul(mat[pr][j], fp::inv(mat[pr][jj], p), p);
            if (!c) continue;
            for (int i = 0; i < tgt_dim; ++i)
              mat[i][j] = fp::sub(mat[i][j], fp::mul(c, mat[i][jj], p), p);
            for (int i = 0; i < src_dim; ++i)
              track[i][j] =
                  fp::sub(track[i][j], fp::mul(c, track[i][jj], p), p);
          }
          bool zero = true;
          for (int i = 0; i < tgt_dim; ++i) zero &= (mat[i][j] == 0);
          if (zero) {
            std::vector<uint32_t> kv(src_dim);
            for (int i = 0; i < src_dim; ++i) kv[i] = track[i][j];
            ker.push_back(std::move(kv));
          }
        }
        (void)used_row;
      }
      if (!ker.empty()) kernels[d] = ker;

      // minimal generators at degree d: kernel modulo m * (lower kernels)
      Span span(p);
      for (int j = 1; j <= d; ++j) {
        auto it = kernels.find(d - j);
        if (it == kernels.end()) continue;
        auto low_off = offsets_at(cur.src_deg, d - j);
        for (const auto& u : monomials_of_degree(n, j)) {
          for (const auto& kv : it->second) {
            // multiply the kernel vector by the monomial u
            std::vector<uint32_t> out(src_dim, 0);
            for (size_t gj = 0; gj < cur.src_deg.size(); ++gj) {
              int dlow = d - j - cur.src_deg[gj];
              if (dlow < 0 || dlow > max_degree_) continue;
              const Piece& plo = piece(dlow);
              for (size_t b = 0; b < plo.basis.size(); ++b) {
                uint32_t c = kv[low_off[gj] + b];
                if (!c) continue;
                Poly mono = poly_term(R, plo.mons[plo.basis[b]], c);
                Poly prod = mul_term(R, mono, u, 1);
                auto coords = project(d - cur.src_deg[gj], prod);
                for (size_t t = 0; t < coords.size(); ++t)
                  if (coords[t])
                    out[src_off[gj] + t] =
                        fp::add(out[src_off[gj] + t], coords[t], p);
              }
            }
            span.add(std::move(out));
          }
        }
      }
      for (const auto& kv : ker) {
        std::vector<uint32_t> probe = kv;
        if (!span.add(std::move(probe))) continue;
        // a new minimal generator of the kernel: record as polynomial column
        std::vector<Poly> col(cur.src_deg.size(), poly_zero());
        for (size_t gj = 0; gj < cur.src_deg.size(); ++gj) {
          int dj = d - cur.src_deg[gj];
          if (dj < 0 || dj > max_degree_) continue;
          const Piece& pj = piece(dj);
          std::vector<Term> ts;
          for (size_t b = 0; b < pj.basis.size(); ++b) {
            uint32_t c = kv[src_off[gj] + b];
            if (c) ts.push_back(Term{pj.mons[pj.basis[b]], c});
          }
          col[gj] = poly_from_terms(R, std::move(ts));
        }
        next.src_deg.push_back(d);
        next.cols.push_back(std::move(col));
      }
    }
    cur = std::move(next);
  }
  return betti;
}

uint64_t DenseOracle::cyclic_quotient_length(const std::vector<Poly>& extra) {
  const PolyRing& R = ring_->poly_ring();
  const uint32_t p = R.p;
  uint64_t total = 0;
  int zero_run = 0;
  for (int d = 0; d <= max_degree_; ++d) {
    Span span(p);
    for (const auto& g : extra) {
      if (g.is_zero()) continue;
      int dg = static_cast<int>(total_degree(g.terms.front().m));
      if (dg > d) continue;
      for (const auto& u : monomials_of_degree(R.nvars(), d - dg)) {
        Poly prod = mul_term(R, g, u, 1);
        span.add(project(d, prod));
      }
    }
    uint64_t dim = dim_piece(d) - span.rank();
    total += dim;
    zero_run = (dim == 0) ? zero_run + 1 : 0;
    if (zero_run > R.nvars() + 1 && d > 2) break;
  }
  return total;
}

}  // namespace phicurv::testoracle
