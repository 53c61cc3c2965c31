#pragma once

#include <cstdint>
#include <limits>
#include <utility>

#include "phicurv/endo.hpp"

namespace phicurv {

enum class TableKind { Betti, Bass };

struct BettiTable {
  TableKind kind = TableKind::Betti;
  std::string over = "R";  // "R" or the endomorphism description
  int lo = 0;
  std::vector<int64_t> values;  // values[n - lo]
  int nmax = 0;
  std::string module_id;

  int64_t at(int n) const {
    if (n < lo || n > nmax) return 0;
    return values[n - lo];
  }
};

struct GrowthEstimate {
  double root_tail = 0.0;
  double ratio_tail = 0.0;
  bool ratio_defined = false;
  double fitted_rate = 0.0;
  double residual = 0.0;
  int window = 4;
  double poly_degree_fit = 0.0;
  bool cx_infinite = false;
  int cx = 0;
};

struct CheckReport {
  std::string name;
  std::string inputs;
  bool consistent = true;
  double tolerance = 0.0;
  int witness_degree = std::numeric_limits<int>::min();
  std::vector<std::string> columns;       // per-degree data column names
  std::vector<std::vector<double>> rows;  // rows[i][0] is the degree
  std::vector<std::pair<std::string, double>> stats;

  const char* verdict() const { return consistent ? "consistent" : "violated"; }
};

constexpr int kDefaultNmax = 8;
constexpr int kDefaultWindow = 4;
constexpr double kDefaultTolerance = 0.3;

// Minimal free resolution of M, truncated at homological degree nmax.
// Every differential entry lies in m; ranks at degrees < nmax are final.
ChainComplex free_resolution(const FinModule& M, int nmax);

// Cached minimal free resolution of k = R/m, extended on demand.
ChainComplex resolution_of_k(const RingPtr& ring, int depth);

BettiTable betti_numbers(const FinModule& M, int nmax);

// beta_n over phi^e: rank_k H_n(twist(F) (x) K(y;R) (x) M) with y a minimal
// generating set of m modulo phi^e(m)R.
BettiTable betti_over(const EndoMap& phi, int e, const FinModule& M, int nmax);

// mu_n over phi^e via the Ext route (dual of the twisted resolution).
BettiTable bass_over(const EndoMap& phi, int e, const FinModule& M, int nmax);

// Same tables with a bounded complex of presented terms in place of M.
BettiTable betti_over_complex(const EndoMap& phi, int e, const ChainComplex& N,
                              int nmax);

std::vector<uint64_t> tor_lengths(const EndoMap& phi, int e, const FinModule& M,
                                  int nmax);

bool artinian_mod_image(const EndoMap& phi_e);

GrowthEstimate growth_estimate(const BettiTable& T, int window,
                               double tolerance);
GrowthEstimate curvature_estimate(const BettiTable& T,
                                  int window = kDefaultWindow,
                                  double tolerance = kDefaultTolerance);
GrowthEstimate complexity_estimate(const BettiTable& T,
                                   int window = kDefaultWindow,
                                   double tolerance = kDefaultTolerance);

CheckReport poincare_identity_check(const EndoMap& phi, int e,
                                    const FinModule& M,
                                    const std::vector<Poly>& extra_gens,
                                    int nmax);

CheckReport kunz_regularity_test(const RingPtr& ring, const FinModule& M,
                                 int e, int nmax);

// Complete-intersection test: nu(I) = codim oracle vs. the empirical growth
// of the Betti table (of k, or over phi when given).
CheckReport ci_test(const RingPtr& ring, const EndoMap* phi = nullptr,
                    int e = 1, const FinModule* M = nullptr,
                    int nmax = kDefaultNmax, int window = kDefaultWindow,
                    double tolerance = kDefaultTolerance);

CheckReport check_main_theorem(const EndoMap& phi, int e, const FinModule& M,
                               int nmax, int window = kDefaultWindow,
                               double tolerance = kDefaultTolerance);

CheckReport check_duality(const EndoMap& phi, int e, const FinModule& M,
                          int nmax);

CheckReport check_composition(const EndoMap& rho, const EndoMap& phi,
                              const FinModule& L, const FinModule& M, int nmax,
                              int window = kDefaultWindow,
                              double tolerance = kDefaultTolerance);

// Least i >= 1 such that the Serre truncation J^i of K^R is exact in every
// degree; an upper bound for the homotopical Loewy length of K^R.
int loewy_bound(const RingPtr& ring);

CheckReport flat_length_check(const RingPtr& ring, const FinModule& M, int e,
                              int n_upto);

// Minimal number of generators of the defining ideal (homogeneous case).
int ideal_minimal_generators(const RingPtr& ring);

// k-linear dual of K^M over an artinian ring, as a presented complex in
// degrees [-edim, 0]; the Matlis dual for finite-length modules.
ChainComplex matlis_dual_koszul(const FinModule& M);

}  // namespace phicurv
