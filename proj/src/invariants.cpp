#include "phicurv/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace phicurv {

namespace {

// Gaussian cancellation of unit pivots in a differential F_1 -> F_0 under
// construction: A becomes u*D - C*B on the reduced frames. Returns the
// original indices of the removed rows (= removed F_1-frame elements of the
// previous differential's column space).
std::vector<int> cancel_units(const QuotientRing& Q, Matrix& A) {
  const PolyRing& R = Q.poly_ring();
  std::vector<int> orig(A.rows);
  for (int i = 0; i < A.rows; ++i) orig[i] = i;
  std::vector<int> removed;
  for (;;) {
    int pj = -1, pi = -1;
    for (int j = 0; j < A.ncols() && pj < 0; ++j)
      for (const auto& t : A.cols[j])
        if (mon_is_one(t.m)) {
          pj = j;
          pi = t.pos;
          break;
        }
    if (pj < 0) break;
    Poly u = svec_component(R, A.cols[pj], pi);
    Matrix next;
    next.rows = A.rows - 1;
    for (int j = 0; j < A.ncols(); ++j) {
      if (j == pj) continue;
      Poly b = svec_component(R, A.cols[j], pi);
      SVec col = svec_mul_poly(R, A.cols[j], u);
      if (!b.is_zero())
        col = svec_add(R, col, svec_mul_poly(R, A.cols[pj], negate(R, b)));
      SVec dropped;
      for (const auto& t : col) {
        if (t.pos == pi) continue;
        dropped.push_back(VTerm{t.m, t.pos > pi ? t.pos - 1 : t.pos, t.c});
      }
      dropped = Q.nf_vec(svec_sorted(R, std::move(dropped)));
      if (!dropped.empty()) next.cols.push_back(std::move(dropped));
    }
    removed.push_back(orig[pi]);
    orig.erase(orig.begin() + pi);
    A = std::move(next);
  }
  return removed;
}

// One resolution step: the next minimal differential, mutating `prev` when
// redundant generators get cancelled.
Matrix resolution_step(const QuotientRing& Q, Matrix& prev) {
  Matrix next;
  next.rows = prev.ncols();
  next.cols = prune_span_generators(Q, Q.syzygies_over(prev.cols, prev.rows),
                                    prev.ncols());
  auto removed = cancel_units(Q, next);
  if (!removed.empty()) {
    std::sort(removed.begin(), removed.end(), std::greater<int>());
    for (int r : removed) prev.cols.erase(prev.cols.begin() + r);
  }
  return next;
}

struct ResState {
  RingPtr ring;  // keeps the key alive
  int frame0 = 0;
  std::vector<Matrix> diffs;
};

std::mutex res_mutex;
std::map<const QuotientRing*, ResState>& res_cache() {
  static std::map<const QuotientRing*, ResState> cache;
  return cache;
}

ChainComplex assemble_resolution(const RingPtr& ring, int frame0,
                                 const std::vector<Matrix>& diffs, int depth) {
  std::vector<int> ranks{frame0};
  std::vector<Matrix> d;
  for (int s = 0; s < depth; ++s) {
    d.push_back(diffs[s]);
    ranks.push_back(diffs[s].ncols());
  }
  return make_complex(ring, 0, std::move(ranks), std::move(d));
}

}  // namespace

ChainComplex free_resolution(const FinModule& M, int nmax) {
  if (nmax < 0) fail(ErrorCode::BadInput, "resolution depth must be >= 0");
  FinModule Mm = minimal_presentation(M);
  if (Mm.frame == 0) fail(ErrorCode::ZeroModule, "free_resolution of the zero module");
  const QuotientRing& Q = *M.ring;
  std::vector<Matrix> diffs;
  if (nmax >= 1) {
    Matrix d1;
    d1.rows = Mm.frame;
    d1.cols = Mm.rel;
    diffs.push_back(std::move(d1));
    for (int s = 2; s <= nmax; ++s)
      diffs.push_back(resolution_step(Q, diffs.back()));
  }
  return assemble_resolution(M.ring, Mm.frame, diffs, nmax);
}

ChainComplex resolution_of_k(const RingPtr& ring, int depth) {
  if (depth < 0) depth = 0;
  std::lock_guard<std::mutex> lock(res_mutex);
  ResState& st = res_cache()[ring.get()];
  if (!st.ring) {
    st.ring = ring;
    FinModule kmin = minimal_presentation(FinModule::residue_field(ring));
    st.frame0 = kmin.frame;
    Matrix d1;
    d1.rows = kmin.frame;
    d1.cols = kmin.rel;
    st.diffs.push_back(std::move(d1));
  }
  while (static_cast<int>(st.diffs.size()) < depth)
    st.diffs.push_back(resolution_step(*ring, st.diffs.back()));
  return assemble_resolution(ring, st.frame0, st.diffs, depth);
}

BettiTable betti_numbers(const FinModule& M, int nmax) {
  if (is_zero_module(M))
    fail(ErrorCode::ZeroModule, "betti_numbers of the zero module");
  ChainComplex F = free_resolution(M, nmax + 1);
  BettiTable T;
  T.kind = TableKind::Betti;
  T.over = "R";
  T.lo = 0;
  T.nmax = nmax;
  T.module_id = M.label;
  for (int n = 0; n <= nmax; ++n) T.values.push_back(F.rank_at(n));
  return T;
}

namespace {

std::vector<Poly> koszul_elements_for(const EndoMap& phi_e) {
  const PolyRing& R = phi_e.ring->poly_ring();
  std::vector<Poly> out;
  for (int i : minimal_generators_mod_image(phi_e))
    out.push_back(poly_var(R, i));
  return out;
}

// rank_k H_n(twist(F) (x) K(elems) (x) N) for n in [lo..nmax]
BettiTable tor_table_core(const EndoMap& phi_e,
                          const std::vector<Poly>& elems,
                          const ChainComplex& N, int lo, int nmax,
                          const std::string& module_id) {
  const RingPtr& ring = phi_e.ring;
  int depth = nmax + 1 - N.lo;
  ChainComplex F = resolution_of_k(ring, depth);
  ChainComplex X = twist_complex(F, phi_e);
  if (!elems.empty()) X = tensor_complexes(X, koszul_complex(ring, elems));
  X = tensor_complexes(X, N);
  BettiTable T;
  T.kind = TableKind::Betti;
  T.over = phi_e.describe();
  T.lo = lo;
  T.nmax = nmax;
  T.module_id = module_id;
  for (const LengthResult& l : homology_lengths(X, lo, nmax)) {
    if (!l.finite)
      fail(ErrorCode::BadInput,
           "internal: infinite homology length in a Betti table");
    T.values.push_back(static_cast<int64_t>(l.value));
  }
  return T;
}

BettiTable ext_table_core(const EndoMap& phi_e, const std::vector<Poly>& elems,
                          const ChainComplex& N, int nmax,
                          const std::string& module_id) {
  const RingPtr& ring = phi_e.ring;
  const int ed = edim_of(phi_e);
  const int ey = static_cast<int>(elems.size());
  int depth = (nmax - ed) + 1 + ey + std::max(0, N.hi());
  if (depth < 1) depth = 1;
  ChainComplex F = resolution_of_k(ring, depth);
  ChainComplex X = dual_complex(twist_complex(F, phi_e));
  if (!elems.empty()) X = tensor_complexes(X, koszul_complex(ring, elems));
  X = tensor_complexes(X, N);
  BettiTable T;
  T.kind = TableKind::Bass;
  T.over = phi_e.describe();
  T.lo = 0;
  T.nmax = nmax;
  T.module_id = module_id;
  // mu_n reads H_{-(n - ed)}; compute the whole strip at once
  auto lens = homology_lengths(X, -(nmax - ed), ed);
  for (int n = 0; n <= nmax; ++n) {
    const LengthResult& l = lens[(ed - n) - (-(nmax - ed))];
    if (!l.finite)
      fail(ErrorCode::BadInput,
           "internal: infinite homology length in a Bass table");
    T.values.push_back(static_cast<int64_t>(l.value));
  }
  return T;
}

void require_nonzero(const FinModule& M) {
  if (is_zero_module(M))
    fail(ErrorCode::ZeroModule, "the paper's invariants require M != 0");
}

}  // namespace

BettiTable betti_over(const EndoMap& phi, int e, const FinModule& M,
                      int nmax) {
  if (!same_ring(phi.ring, M.ring))
    fail(ErrorCode::RingMismatch, "betti_over: ring mismatch");
  require_nonzero(M);
  EndoMap phi_e = endo_power(phi, e);
  return tor_table_core(phi_e, koszul_elements_for(phi_e),
                        module_as_complex(M), 0, nmax, M.label);
}

BettiTable betti_over_complex(const EndoMap& phi, int e, const ChainComplex& N,
                              int nmax) {
  EndoMap phi_e = endo_power(phi, e);
  return tor_table_core(phi_e, koszul_elements_for(phi_e), N, N.lo, nmax,
                        "complex");
}

BettiTable bass_over(const EndoMap& phi, int e, const FinModule& M, int nmax) {
  if (!same_ring(phi.ring, M.ring))
    fail(ErrorCode::RingMismatch, "bass_over: ring mismatch");
  require_nonzero(M);
  EndoMap phi_e = endo_power(phi, e);
  return ext_table_core(phi_e, koszul_elements_for(phi_e),
                        module_as_complex(M), nmax, M.label);
}

bool artinian_mod_image(const EndoMap& phi_e) {
  const QuotientRing& Q = *phi_e.ring;
  const PolyRing& R = Q.poly_ring();
  std::vector<SVec> gens;
  for (const auto& g : Q.ideal_gb().gens) gens.push_back(g);
  for (const auto& f : phi_e.images)
    if (!f.is_zero()) gens.push_back(svec_from_poly(R, f));
  GroebnerBasis G = buchberger(R, gens, 1);
  return length_of_quotient(R, G, 1).finite;
}

std::vector<uint64_t> tor_lengths(const EndoMap& phi, int e,
                                  const FinModule& M, int nmax) {
  if (!same_ring(phi.ring, M.ring))
    fail(ErrorCode::RingMismatch, "tor_lengths: ring mismatch");
  require_nonzero(M);
  EndoMap phi_e = endo_power(phi, e);
  if (!artinian_mod_image(phi_e))
    fail(ErrorCode::NotArtinianCondition,
         "R/phi^e(m)R is not artinian; Tor lengths need not be finite");
  const RingPtr& ring = phi.ring;
  ChainComplex F = resolution_of_k(ring, nmax + 1);
  ChainComplex X =
      tensor_complexes(twist_complex(F, phi_e), module_as_complex(M));
  std::vector<uint64_t> out;
  for (const LengthResult& l : homology_lengths(X, 0, nmax)) {
    if (!l.finite)
      fail(ErrorCode::NotArtinianCondition,
           "internal: infinite Tor length despite the artinian check");
    out.push_back(l.value);
  }
  return out;
}

namespace {

int round_half_down(double x) {
  double f = std::floor(x);
  double frac = x - f;
  if (frac > 0.5 + 1e-9) return static_cast<int>(f) + 1;
  return static_cast<int>(f);
}

}  // namespace

GrowthEstimate growth_estimate(const BettiTable& T, int window,
                               double tolerance) {
  if (window < 1) fail(ErrorCode::BadInput, "window must be >= 1");
  if (T.nmax < window + 2)
    fail(ErrorCode::TableTooShort,
         "growth estimate needs nmax >= window + 2");
  GrowthEstimate g;
  g.window = window;
  const int n1 = T.nmax;
  const int n0 = n1 - window + 1;
  if (T.at(n1) > 0 && n1 > 0)
    g.root_tail = std::pow(static_cast<double>(T.at(n1)), 1.0 / n1);
  if (T.at(n1 - 1) > 0) {
    g.ratio_defined = true;
    g.ratio_tail =
        static_cast<double>(T.at(n1)) / static_cast<double>(T.at(n1 - 1));
  }
  std::vector<std::pair<int, double>> pts;
  for (int n = n0; n <= n1; ++n)
    if (T.at(n) > 0) pts.emplace_back(n, std::log(static_cast<double>(T.at(n))));
  if (pts.empty()) {
    g.fitted_rate = 0.0;
  } else if (pts.size() == 1) {
    g.fitted_rate = std::exp(pts[0].second / pts[0].first);
  } else {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto& [n, y] : pts) {
      sx += n;
      sy += y;
      sxx += double(n) * n;
      sxy += n * y;
    }
    const double m = static_cast<double>(pts.size());
    double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    double icept = (sy - slope * sx) / m;
    g.fitted_rate = std::exp(slope);
    double ss = 0;
    for (auto& [n, y] : pts) {
      double r = y - (slope * n + icept);
      ss += r * r;
    }
    g.residual = std::sqrt(ss / m);
  }
  // polynomial degree: slope of log beta_n against log n
  std::vector<std::pair<double, double>> lpts;
  for (int n = std::max(n0, 1); n <= n1; ++n)
    if (T.at(n) > 0)
      lpts.emplace_back(std::log(static_cast<double>(n)),
                        std::log(static_cast<double>(T.at(n))));
  if (lpts.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto& [x, y] : lpts) {
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double m = static_cast<double>(lpts.size());
    double denom = m * sxx - sx * sx;
    if (std::abs(denom) > 1e-12)
      g.poly_degree_fit = (m * sxy - sx * sy) / denom;
  }
  if (g.fitted_rate > 1.0 + tolerance) {
    g.cx_infinite = true;
  } else if (pts.empty()) {
    g.cx = 0;
  } else {
    g.cx = 1 + std::max(0, round_half_down(std::max(0.0, g.poly_degree_fit)));
  }
  return g;
}

GrowthEstimate curvature_estimate(const BettiTable& T, int window,
                                  double tolerance) {
  return growth_estimate(T, window, tolerance);
}

GrowthEstimate complexity_estimate(const BettiTable& T, int window,
                                   double tolerance) {
  return growth_estimate(T, window, tolerance);
}

namespace {

int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  int64_t r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

// basis of the row space spanned so far; returns true if row was new
bool gauss_add_row(std::vector<std::vector<uint32_t>>& basis,
                   std::vector<uint32_t> row, uint32_t p) {
  const int n = static_cast<int>(row.size());
  for (const auto& b : basis) {
    int piv = -1;
    for (int i = 0; i < n; ++i)
      if (b[i]) {
        piv = i;
        break;
      }
    if (piv >= 0 && row[piv]) {
      uint32_t f = fp::mul(row[piv], fp::inv(b[piv], p), p);
      for (int i = 0; i < n; ++i) row[i] = fp::sub(row[i], fp::mul(f, b[i], p), p);
    }
  }
  for (int i = 0; i < n; ++i)
    if (row[i]) {
      basis.push_back(std::move(row));
      return true;
    }
  return false;
}

}  // namespace

CheckReport poincare_identity_check(const EndoMap& phi, int e,
                                    const FinModule& M,
                                    const std::vector<Poly>& extra_gens,
                                    int nmax) {
  if (!same_ring(phi.ring, M.ring))
    fail(ErrorCode::RingMismatch, "poincare_identity_check: ring mismatch");
  require_nonzero(M);
  const QuotientRing& Q = *phi.ring;
  const PolyRing& R = Q.poly_ring();
  EndoMap phi_e = endo_power(phi, e);
  std::vector<Poly> y = koszul_elements_for(phi_e);
  const int ed = edim_of(phi_e);

  std::vector<Poly> xset = y;
  for (const auto& g : extra_gens) {
    Poly gn = Q.nf(g);
    if (constant_coeff(gn) != 0 || gn.is_zero())
      fail(ErrorCode::GeneratorSetInvalid,
           "extra generator must be a non-zero element of m");
    for (const auto& h : xset)
      if (h == gn)
        fail(ErrorCode::GeneratorSetInvalid,
             "duplicate generator in the proposed set: " + to_string(R, gn));
    xset.push_back(gn);
  }
  // the set must generate m modulo phi^e(m)R + m^2
  {
    std::vector<std::vector<uint32_t>> basis;
    for (const auto& g : Q.ideal_gb().gens)
      gauss_add_row(basis, linear_part(R, svec_component(R, g, 0)), R.p);
    for (const auto& f : phi_e.images)
      gauss_add_row(basis, linear_part(R, f), R.p);
    int need = ed;
    int got = 0;
    for (const auto& f : xset)
      if (gauss_add_row(basis, linear_part(R, f), R.p)) ++got;
    if (got < need)
      fail(ErrorCode::GeneratorSetInvalid,
           "proposed set does not generate m modulo phi(m)R");
  }
  const int q = static_cast<int>(xset.size());

  BettiTable base =
      tor_table_core(phi_e, y, module_as_complex(M), 0, nmax, M.label);
  BettiTable rhs =
      tor_table_core(phi_e, xset, module_as_complex(M), 0, nmax, M.label);

  CheckReport rep;
  rep.name = "poincare-identity";
  rep.inputs = Q.description() + ", M = " + M.label + ", q = " +
               std::to_string(q) + ", edim(phi^e) = " + std::to_string(ed);
  rep.tolerance = 0.0;
  rep.columns = {"n", "lhs", "rhs"};
  for (int n = 0; n <= nmax; ++n) {
    int64_t lhs = 0;
    for (int j = 0; j <= q - ed; ++j)
      lhs += binomial(q - ed, j) * base.at(n - j);
    int64_t r = rhs.at(n);
    rep.rows.push_back({double(n), double(lhs), double(r)});
    if (lhs != r && rep.consistent) {
      rep.consistent = false;
      rep.witness_degree = n;
    }
  }
  rep.stats.emplace_back("q", q);
  rep.stats.emplace_back("edim_phi", ed);
  return rep;
}

CheckReport kunz_regularity_test(const RingPtr& ring, const FinModule& M,
                                 int e, int nmax) {
  require_nonzero(M);
  EndoMap phi = frobenius_endo(ring, e);
  const int ey = edim_of(phi);
  const int start = ring->edim() + ey + 1;
  if (start > nmax)
    fail(ErrorCode::BadInput,
         "nmax too small for the flatness window [edim+edim(phi^e)+1, nmax]");
  BettiTable T = betti_over(phi, 1, M, nmax);
  bool engine_regular = true;
  int witness = std::numeric_limits<int>::min();
  for (int n = start; n <= nmax; ++n)
    if (T.at(n) != 0) {
      engine_regular = false;
      if (witness == std::numeric_limits<int>::min()) witness = n;
    }
  bool oracle_regular = ring->is_regular();

  CheckReport rep;
  rep.name = "kunz-regularity";
  rep.inputs = ring->description() + ", M = " + M.label +
               ", e = " + std::to_string(e);
  rep.columns = {"n", "beta_phi"};
  for (int n = 0; n <= nmax; ++n)
    rep.rows.push_back({double(n), double(T.at(n))});
  rep.consistent = (engine_regular == oracle_regular);
  if (!rep.consistent) rep.witness_degree = witness;
  rep.stats.emplace_back("engine_regular", engine_regular ? 1 : 0);
  rep.stats.emplace_back("oracle_regular", oracle_regular ? 1 : 0);
  rep.stats.emplace_back("window_start", start);
  rep.stats.emplace_back("edim", ring->edim());
  rep.stats.emplace_back("dim", ring->dim());
  return rep;
}

int ideal_minimal_generators(const RingPtr& ring) {
  const PolyRing& R = ring->poly_ring();
  std::vector<SVec> gens;
  for (const auto& g : ring->ideal_gb().gens) gens.push_back(g);
  // greedy pruning; valid for homogeneous ideals
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < gens.size(); ++i) {
      std::vector<SVec> others;
      for (size_t j = 0; j < gens.size(); ++j)
        if (j != i) others.push_back(gens[j]);
      GroebnerBasis G = buchberger(R, others, 1);
      if (normal_form(R, gens[i], G).empty()) {
        gens.erase(gens.begin() + i);
        changed = true;
        break;
      }
    }
  }
  return static_cast<int>(gens.size());
}

CheckReport ci_test(const RingPtr& ring, const EndoMap* phi, int e,
                    const FinModule* M, int nmax, int window,
                    double tolerance) {
  // oracle: after eliminating linear forms, nu(I) = codim
  const int linear_forms = ring->nvars() - ring->edim();
  const int nu_min = ideal_minimal_generators(ring) - linear_forms;
  const int codim = ring->codim();
  const bool oracle_ci = (nu_min == codim);

  BettiTable T;
  if (phi) {
    FinModule module = M ? *M : FinModule::residue_field(ring);
    T = betti_over(*phi, e, module, nmax);
  } else {
    T = betti_numbers(FinModule::residue_field(ring), nmax);
  }
  GrowthEstimate g = growth_estimate(T, window, tolerance);
  const bool empirical_ci =
      g.fitted_rate <= 1.0 + tolerance && !g.cx_infinite && g.cx <= codim;

  CheckReport rep;
  rep.name = "complete-intersection";
  rep.inputs = ring->description();
  rep.tolerance = tolerance;
  rep.columns = {"n", "beta"};
  for (int n = 0; n <= nmax; ++n)
    rep.rows.push_back({double(n), double(T.at(n))});
  rep.consistent = (oracle_ci == empirical_ci);
  rep.stats.emplace_back("oracle_ci", oracle_ci ? 1 : 0);
  rep.stats.emplace_back("empirical_ci", empirical_ci ? 1 : 0);
  rep.stats.emplace_back("nu_ideal_min", nu_min);
  rep.stats.emplace_back("codim", codim);
  rep.stats.emplace_back("fitted_rate", g.fitted_rate);
  rep.stats.emplace_back("cx_estimate", g.cx_infinite ? -1 : g.cx);
  return rep;
}

CheckReport check_main_theorem(const EndoMap& phi, int e, const FinModule& M,
                               int nmax, int window, double tolerance) {
  require_nonzero(M);
  BettiTable tb = betti_over(phi, e, M, nmax);
  BettiTable tk = betti_numbers(FinModule::residue_field(phi.ring), nmax);
  BettiTable tm = bass_over(phi, e, M, nmax);
  GrowthEstimate gb = growth_estimate(tb, window, tolerance);
  GrowthEstimate gk = growth_estimate(tk, window, tolerance);
  GrowthEstimate gm = growth_estimate(tm, window, tolerance);
  double d1 = std::abs(gb.fitted_rate - gk.fitted_rate);
  double d2 = std::abs(gb.fitted_rate - gm.fitted_rate);
  double d3 = std::abs(gk.fitted_rate - gm.fitted_rate);
  double disc = std::max({d1, d2, d3});

  CheckReport rep;
  rep.name = "main-theorem-rates";
  rep.inputs = phi.ring->description() + ", M = " + M.label +
               ", e = " + std::to_string(e);
  rep.tolerance = tolerance;
  rep.columns = {"n", "beta_phi", "beta_k", "mu_phi"};
  for (int n = 0; n <= nmax; ++n)
    rep.rows.push_back(
        {double(n), double(tb.at(n)), double(tk.at(n)), double(tm.at(n))});
  rep.consistent = disc <= tolerance;
  rep.stats.emplace_back("rate_beta_phi", gb.fitted_rate);
  rep.stats.emplace_back("rate_beta_k", gk.fitted_rate);
  rep.stats.emplace_back("rate_mu_phi", gm.fitted_rate);
  rep.stats.emplace_back("max_discrepancy", disc);
  return rep;
}

ChainComplex matlis_dual_koszul(const FinModule& M) {
  const RingPtr& ring = M.ring;
  const QuotientRing& Q = *ring;
  const PolyRing& R = Q.poly_ring();
  if (!Q.is_artinian())
    fail(ErrorCode::NotArtinianRing,
         "Matlis duality via vector-space duals needs an artinian ring");
  std::vector<Poly> elems;
  for (int i : Q.minimal_m_generator_indices()) elems.push_back(poly_var(R, i));
  ChainComplex KM = koszul_complex(ring, elems, M);
  const int d = KM.hi();

  struct Fin {
    GroebnerBasis gb;
    std::vector<std::pair<Monomial, int>> basis;
    std::map<std::pair<Monomial, int>, int> index;
  };
  std::vector<Fin> fins(d + 1);
  for (int j = 0; j <= d; ++j) {
    std::vector<SVec> rel;
    if (const Matrix* m = KM.rels_at(j)) rel = m->cols;
    fins[j].gb = Q.module_gb(rel, KM.rank_at(j));
    fins[j].basis = standard_monomials(R, fins[j].gb, KM.rank_at(j));
    for (size_t b = 0; b < fins[j].basis.size(); ++b)
      fins[j].index[fins[j].basis[b]] = static_cast<int>(b);
  }

  // k-matrix of an R-linear frame map X_j -> X_{j-1} on the chosen bases
  auto k_matrix = [&](const Matrix& A, const Fin& src, const Fin& dst) {
    std::vector<std::vector<uint32_t>> m(
        dst.basis.size(), std::vector<uint32_t>(src.basis.size(), 0));
    for (size_t b = 0; b < src.basis.size(); ++b) {
      const auto& [mon, pos] = src.basis[b];
      SVec img = svec_mul_term(R, A.cols[pos], mon, 1);
      img = normal_form(R, img, dst.gb);
      for (const auto& t : img) {
        auto it = dst.index.find({t.m, t.pos});
        if (it == dst.index.end())
          fail(ErrorCode::BadInput, "internal: non-standard term in expansion");
        m[it->second][b] = fp::add(m[it->second][b], t.c, R.p);
      }
    }
    return m;
  };

  // multiplication matrices per variable and per degree
  auto action_matrix = [&](int var, const Fin& f) {
    std::vector<std::vector<uint32_t>> m(
        f.basis.size(), std::vector<uint32_t>(f.basis.size(), 0));
    Monomial xv = mon_one(R.nvars());
    xv[var] = 1;
    for (size_t b = 0; b < f.basis.size(); ++b) {
      const auto& [mon, pos] = f.basis[b];
      SVec img{VTerm{mon_mul(mon, xv), pos, 1}};
      img = normal_form(R, img, f.gb);
      for (const auto& t : img) {
        auto it = f.index.find({t.m, t.pos});
        if (it == f.index.end())
          fail(ErrorCode::BadInput, "internal: non-standard term in expansion");
        m[it->second][b] = fp::add(m[it->second][b], t.c, R.p);
      }
    }
    return m;
  };

  // dual complex in degrees [-d, 0]
  std::vector<int> ranks;
  std::vector<Matrix> diffs;
  std::vector<Matrix> rels;
  for (int i = -d; i <= 0; ++i)
    ranks.push_back(static_cast<int>(fins[-i].basis.size()));
  for (int i = -d; i <= 0; ++i) {
    const Fin& f = fins[-i];
    const int D = static_cast<int>(f.basis.size());
    Matrix rel;
    rel.rows = D;
    for (int v = 0; v < R.nvars(); ++v) {
      auto act = action_matrix(v, f);
      Monomial xv = mon_one(R.nvars());
      xv[v] = 1;
      for (int b = 0; b < D; ++b) {
        SVec col{VTerm{xv, b, 1}};
        // transpose action: x_v e_b - sum_c act[b][c] e_c
        for (int c = 0; c < D; ++c)
          if (act[b][c])
            col.push_back(VTerm{mon_one(R.nvars()), c, fp::neg(act[b][c], R.p)});
        rel.cols.push_back(svec_sorted(R, std::move(col)));
      }
    }
    rels.push_back(std::move(rel));
  }
  for (int i = -d + 1; i <= 0; ++i) {
    // differential N_i -> N_{i-1}: transpose of the k-matrix of d_{-i+1}
    const Fin& src = fins[-i + 1];
    const Fin& dst = fins[-i];
    auto km = k_matrix(KM.diff_at(-i + 1), src, dst);  // |dst| x |src|
    Matrix dN;
    dN.rows = static_cast<int>(src.basis.size());
    for (size_t r = 0; r < dst.basis.size(); ++r) {
      SVec col;
      for (size_t b = 0; b < src.basis.size(); ++b)
        if (km[r][b])
          col.push_back(VTerm{mon_one(R.nvars()), static_cast<int>(b),
                              km[r][b]});
      dN.cols.push_back(svec_sorted(R, std::move(col)));
    }
    diffs.push_back(std::move(dN));
  }

  return make_complex(ring, -d, std::move(ranks), std::move(diffs),
                      std::move(rels));
}

CheckReport check_duality(const EndoMap& phi, int e, const FinModule& M,
                          int nmax) {
  if (!same_ring(phi.ring, M.ring))
    fail(ErrorCode::RingMismatch, "check_duality: ring mismatch");
  const QuotientRing& Q = *phi.ring;
  if (!Q.is_artinian())
    fail(ErrorCode::NotArtinianRing,
         "duality check requires an artinian ring");
  require_nonzero(M);

  ChainComplex N = matlis_dual_koszul(M);
  BettiTable lhs = betti_over_complex(phi, e, N, nmax);
  const int ed = Q.edim();
  const int shift = edim_of(endo_power(phi, e));
  // The Bass series is indexed with the edim(phi) shift, while the Koszul
  // width enters the Tor side unshifted; the identity read on the engine's
  // tables is P^phi_N(t) * t^shift = I^phi_M(t) * (1+t)^edim.
  BettiTable bass = bass_over(phi, e, M, nmax + shift);

  CheckReport rep;
  rep.name = "duality";
  rep.inputs = Q.description() + ", M = " + M.label +
               ", e = " + std::to_string(e);
  rep.tolerance = 0.0;
  rep.columns = {"n", "P_phi_N", "normalized_bass_side"};
  for (int n = N.lo; n <= nmax; ++n) {
    int64_t l = lhs.at(n);
    int64_t r = 0;
    for (int j = 0; j <= ed; ++j)
      r += binomial(ed, j) * bass.at(n - j + shift);
    rep.rows.push_back({double(n), double(l), double(r)});
    if (l != r && rep.consistent) {
      rep.consistent = false;
      rep.witness_degree = n;
    }
  }
  rep.stats.emplace_back("edim", ed);
  rep.stats.emplace_back("shift", shift);
  return rep;
}

CheckReport check_composition(const EndoMap& rho, const EndoMap& phi,
                              const FinModule& L, const FinModule& M, int nmax,
                              int window, double tolerance) {
  if (!same_ring(rho.ring, phi.ring) || !same_ring(rho.ring, L.ring) ||
      !same_ring(rho.ring, M.ring))
    fail(ErrorCode::RingMismatch, "check_composition: ring mismatch");
  require_nonzero(L);
  require_nonzero(M);

  EndoMap composite = compose_endos(phi, rho);
  FinModule T = twisted_tensor(L, M, phi);
  BettiTable tc = betti_over(composite, 1, T, nmax);
  BettiTable tl = betti_over(rho, 1, L, nmax);
  BettiTable tm = betti_over(phi, 1, M, nmax);
  GrowthEstimate gc = growth_estimate(tc, window, tolerance);
  GrowthEstimate gl = growth_estimate(tl, window, tolerance);
  GrowthEstimate gm = growth_estimate(tm, window, tolerance);

  const double bound = std::max(gl.fitted_rate, gm.fitted_rate);
  const double slack = bound - gc.fitted_rate;
  bool curv_ok = slack >= -tolerance;
  // complexity sum bound, comparable only when everything is finite
  bool cx_ok = true;
  if (!gc.cx_infinite && !gl.cx_infinite && !gm.cx_infinite)
    cx_ok = gc.cx <= gl.cx + gm.cx;
  else if (gc.cx_infinite && !gl.cx_infinite && !gm.cx_infinite)
    cx_ok = false;

  CheckReport rep;
  rep.name = "composition";
  rep.inputs = rho.ring->description() + ", rho = " + rho.describe() +
               ", phi = " + phi.describe() + ", L = " + L.label +
               ", M = " + M.label;
  rep.tolerance = tolerance;
  rep.columns = {"n", "beta_composite", "beta_rho_L", "beta_phi_M"};
  for (int n = 0; n <= nmax; ++n)
    rep.rows.push_back(
        {double(n), double(tc.at(n)), double(tl.at(n)), double(tm.at(n))});
  rep.consistent = curv_ok && cx_ok;
  rep.stats.emplace_back("rate_composite", gc.fitted_rate);
  rep.stats.emplace_back("rate_rho_L", gl.fitted_rate);
  rep.stats.emplace_back("rate_phi_M", gm.fitted_rate);
  rep.stats.emplace_back("slack", slack);
  rep.stats.emplace_back("cx_composite", gc.cx_infinite ? -1 : gc.cx);
  rep.stats.emplace_back("cx_rho_L", gl.cx_infinite ? -1 : gl.cx);
  rep.stats.emplace_back("cx_phi_M", gm.cx_infinite ? -1 : gm.cx);
  return rep;
}

namespace {

// monomials of total degree exactly d, odometer order
std::vector<Monomial> monomials_of_degree(int nvars, int d) {
  std::vector<Monomial> out;
  Monomial cur(nvars, 0);
  cur[0] = d;
  // enumerate compositions of d into nvars parts
  for (;;) {
    out.push_back(cur);
    // next composition: find the first nonzero entry before the last slot
    int i = 0;
    while (i < nvars - 1 && cur[i] == 0) ++i;
    if (i == nvars - 1) break;
    // move one unit from slot i to slot i+1; reset prefix onto slot 0
    int32_t v = cur[i];
    cur[i] = 0;
    cur[0] = v - 1;
    cur[i + 1] += 1;
  }
  return out;
}

}  // namespace

int loewy_bound(const RingPtr& ring) {
  const QuotientRing& Q = *ring;
  const PolyRing& R = Q.poly_ring();
  auto mgens = Q.minimal_m_generator_indices();
  const int d = static_cast<int>(mgens.size());
  const int n = R.nvars();

  for (int i = 1; i <= 64; ++i) {
    // J^i: degree t term is m^(i-t) * K_t
    std::vector<std::vector<Monomial>> mons(d + 1);
    std::vector<std::map<Monomial, int>> mon_index(d + 1);
    for (int t = 0; t <= d; ++t) {
      mons[t] = monomials_of_degree(n, std::max(0, i - t));
      for (size_t a = 0; a < mons[t].size(); ++a)
        mon_index[t][mons[t][a]] = static_cast<int>(a);
    }
    // subset table for the Koszul part
    std::vector<std::vector<uint32_t>> masks(d + 1);
    for (uint32_t m = 0; m < (1u << d); ++m)
      masks[__builtin_popcount(m)].push_back(m);
    auto subset_index = [&](int t, uint32_t mask) {
      const auto& v = masks[t];
      return static_cast<int>(std::lower_bound(v.begin(), v.end(), mask) -
                              v.begin());
    };

    std::vector<int> ranks(d + 1);
    for (int t = 0; t <= d; ++t)
      ranks[t] = static_cast<int>(mons[t].size() * masks[t].size());
    auto frame_index = [&](int t, int mon_idx, int sub_idx) {
      return mon_idx * static_cast<int>(masks[t].size()) + sub_idx;
    };

    // per-degree relations: syzygies of the monomial generating set of
    // m^(i-t), one block per Koszul frame element
    std::vector<Matrix> rels(d + 1);
    for (int t = 0; t <= d; ++t) {
      std::vector<SVec> gens;
      for (const auto& u : mons[t]) gens.push_back(SVec{VTerm{u, 0, 1 % R.p}});
      auto syz = Q.syzygies_over(gens, 1);
      Matrix rel;
      rel.rows = ranks[t];
      const int stride = static_cast<int>(masks[t].size());
      for (int s = 0; s < stride; ++s)
        for (const auto& sz : syz) {
          SVec col;
          for (const auto& term : sz)
            col.push_back(VTerm{term.m, term.pos * stride + s, term.c});
          rel.cols.push_back(svec_sorted(R, std::move(col)));
        }
      rels[t] = std::move(rel);
    }

    std::vector<Matrix> diffs;
    for (int t = 1; t <= d; ++t) {
      Matrix dt;
      dt.rows = ranks[t - 1];
      const int jt = std::max(0, i - t);
      const int jt1 = std::max(0, i - t + 1);
      for (size_t a = 0; a < mons[t].size(); ++a)
        for (uint32_t mask : masks[t]) {
          SVec col;
          int sign = 0;
          for (int v = 0; v < d; ++v) {
            if (!(mask >> v & 1)) continue;
            uint32_t sub = mask & ~(1u << v);
            int sidx = subset_index(t - 1, sub);
            uint32_t sgn = (sign % 2 == 0) ? 1 % R.p : R.p - 1;
            Monomial prod = mon_mul(mons[t][a], [&] {
              Monomial xv = mon_one(n);
              xv[mgens[v]] = 1;
              return xv;
            }());
            if (jt1 == jt + 1) {
              // u*x_v is itself a generator of m^(i-t+1)
              auto it = mon_index[t - 1].find(prod);
              if (it == mon_index[t - 1].end())
                fail(ErrorCode::BadInput, "internal: loewy frame lookup");
              col.push_back(
                  VTerm{mon_one(n), frame_index(t - 1, it->second, sidx), sgn});
            } else {
              // floor case: target generated by 1, entry is the monomial
              col.push_back(
                  VTerm{prod, frame_index(t - 1, 0, sidx), sgn});
            }
            ++sign;
          }
          dt.cols.push_back(svec_sorted(R, std::move(col)));
        }
      diffs.push_back(std::move(dt));
    }

    ChainComplex J = make_complex(ring, 0, ranks, std::move(diffs),
                                  std::move(rels));
    bool exact = true;
    for (int t = 0; t <= d && exact; ++t)
      if (minimal_presentation(homology(J, t)).frame != 0) exact = false;
    if (exact) return i;
  }
  fail(ErrorCode::BadInput, "loewy_bound: no exact truncation up to i = 64");
}

CheckReport flat_length_check(const RingPtr& ring, const FinModule& M, int e,
                              int n_upto) {
  if (n_upto < 1 || n_upto > kBimodulePowerBudget)
    fail(ErrorCode::SizeBudgetExceeded,
         "flat-length check is budgeted to n <= " +
             std::to_string(kBimodulePowerBudget));
  FinModule Mm = minimal_presentation(M);
  if (Mm.frame == 0) fail(ErrorCode::ZeroModule, "flat_length_check: M = 0");
  EndoMap phi = frobenius_endo(ring, e);

  const int g = Mm.frame;  // nu(M)
  LengthResult fr = module_length(left_residue_tensor(Mm, phi));
  if (!fr.finite)
    fail(ErrorCode::BadInput, "internal: k (x) M has infinite length");
  const int64_t f = static_cast<int64_t>(fr.value);

  bool flat_case = ring->is_regular() && Mm.rel.empty();

  // does m M differ from m^[q] M? equivalently f > g
  const PolyRing& R = ring->poly_ring();
  bool mM_nonzero = false;
  {
    GroebnerBasis G = module_relations_gb(Mm);
    for (int v = 0; v < R.nvars() && !mM_nonzero; ++v)
      for (int j = 0; j < Mm.frame && !mM_nonzero; ++j) {
        Monomial xv = mon_one(R.nvars());
        xv[v] = 1;
        if (!normal_form(R, SVec{VTerm{xv, j, 1}}, G).empty())
          mM_nonzero = true;
      }
  }

  CheckReport rep;
  rep.name = "flat-length";
  rep.inputs = ring->description() + ", M = " + M.label +
               ", e = " + std::to_string(e);
  rep.tolerance = 0.0;
  rep.columns = {"n", "len_k_tensor_Mn", "f^n"};
  bool equalities = true;
  for (int nn = 1; nn <= n_upto; ++nn) {
    FinModule Mn = bimodule_tensor_power(Mm, phi, nn);
    LengthResult ln = module_length(left_residue_tensor(Mn, endo_power(phi, nn)));
    if (!ln.finite)
      fail(ErrorCode::BadInput, "internal: k (x) M^(n) has infinite length");
    int64_t expect = 1;
    for (int t = 0; t < nn; ++t) expect *= f;
    rep.rows.push_back({double(nn), double(ln.value), double(expect)});
    if (static_cast<int64_t>(ln.value) != expect) equalities = false;
  }

  if (flat_case) {
    rep.consistent = equalities;
  } else {
    rep.consistent = mM_nonzero ? (f > g) : (f == g);
  }
  rep.stats.emplace_back("f", static_cast<double>(f));
  rep.stats.emplace_back("g", static_cast<double>(g));
  rep.stats.emplace_back("flat_case", flat_case ? 1 : 0);
  rep.stats.emplace_back("strict", f > g ? 1 : 0);
  return rep;
}

}  // namespace phicurv
