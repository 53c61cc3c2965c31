#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "phicurv/complex.hpp"
#include "test_util.hpp"

using namespace phicurv;
using namespace phicurv::testutil;

namespace {

FinModule coker_from_rows(const RingPtr& Q,
                          const std::vector<std::vector<std::string>>& rows) {
  const PolyRing& R = Q->poly_ring();
  std::vector<std::vector<Poly>> prows;
  for (const auto& row : rows) {
    std::vector<Poly> pr;
    for (const auto& s : row) pr.push_back(parse_poly(R, s));
    prows.push_back(std::move(pr));
  }
  Matrix A = matrix_from_entries(R, prows);
  return FinModule::cokernel(Q, A.rows, A.cols, "test");
}

}  // namespace

TEST_CASE("ring invariants: the canonical suite") {
  auto P1 = ring_poly1();
  CHECK(P1->edim() == 1);
  CHECK(P1->dim() == 1);
  CHECK(P1->is_regular());
  CHECK_FALSE(P1->is_artinian());

  auto P2 = ring_poly2();
  CHECK(P2->edim() == 2);
  CHECK(P2->dim() == 2);
  CHECK(P2->is_regular());

  auto R2 = ring_r2();
  CHECK(R2->edim() == 1);
  CHECK(R2->dim() == 0);
  CHECK_FALSE(R2->is_regular());
  CHECK(R2->is_artinian());
  CHECK(R2->ring_length().value == 2);

  auto R3 = ring_r3();
  CHECK(R3->edim() == 2);
  CHECK(R3->dim() == 1);
  CHECK_FALSE(R3->is_regular());
  CHECK_FALSE(R3->is_artinian());

  auto R4 = ring_r4();
  CHECK(R4->edim() == 2);
  CHECK(R4->dim() == 0);
  CHECK(R4->is_artinian());
  CHECK(R4->ring_length().value == 3);  // basis 1, x, y

  auto SG = ring_semigroup();
  CHECK(SG->edim() == 2);
  CHECK(SG->dim() == 1);
  CHECK_FALSE(SG->is_regular());
}

TEST_CASE("ring rejects non-homogeneous and unit ideals") {
  CHECK_THROWS_AS(QuotientRing::make_from_strings(2, {"x"}, {"x + x^2"}),
                  EngineError);
  CHECK_THROWS_AS(QuotientRing::make_from_strings(2, {"x"}, {"1 + x"}),
                  EngineError);
  // weighted homogeneity admits a^3 + b^2 with wt = (2,3)
  CHECK_THROWS_AS(QuotientRing::make_from_strings(2, {"a", "b"}, {"a^3 + b^2"}),
                  EngineError);
  CHECK_NOTHROW(
      QuotientRing::make_from_strings(2, {"a", "b"}, {"a^3 + b^2"}, {2, 3}));
}

TEST_CASE("ring with a linear form in the ideal") {
  auto Q = QuotientRing::make_from_strings(2, {"x", "y"}, {"x + y"});
  CHECK(Q->edim() == 1);
  CHECK(Q->dim() == 1);
  CHECK(Q->is_regular());
  CHECK(Q->minimal_m_generator_indices().size() == 1);
}

TEST_CASE("minimal_presentation: unit matrix collapses to zero") {
  auto Q = ring_poly1();
  FinModule M = coker_from_rows(Q, {{"1"}});
  FinModule m = minimal_presentation(M);
  CHECK(m.frame == 0);
  CHECK(is_zero_module(M));
}

TEST_CASE("minimal_presentation: already minimal stays put") {
  auto Q = ring_poly1();
  FinModule M = coker_from_rows(Q, {{"x"}});
  FinModule m = minimal_presentation(M);
  CHECK(m.frame == 1);
  REQUIRE(m.rel.size() == 1);
  CHECK(svec_component(Q->poly_ring(), m.rel[0], 0) ==
        parse_poly(Q->poly_ring(), "x"));
}

TEST_CASE("minimal_presentation: [[1,x],[0,y]] -> [y]") {
  auto Q = ring_poly2();
  FinModule M = coker_from_rows(Q, {{"1", "x"}, {"0", "y"}});
  FinModule m = minimal_presentation(M);
  CHECK(m.frame == 1);
  REQUIRE(m.rel.size() == 1);
  CHECK(svec_component(Q->poly_ring(), m.rel[0], 0) ==
        parse_poly(Q->poly_ring(), "y"));
}

TEST_CASE("module length") {
  auto R2 = ring_r2();
  CHECK(module_length(FinModule::ring_module(R2)).value == 2);
  CHECK(module_length(FinModule::residue_field(R2)).value == 1);
  auto P2 = ring_poly2();
  CHECK_FALSE(module_length(FinModule::ring_module(P2)).finite);
}

TEST_CASE("tensor_modules: unit and annihilation") {
  auto Q = ring_poly2();
  FinModule M = coker_from_rows(Q, {{"x"}});
  FinModule MR = tensor_modules(M, FinModule::ring_module(Q));
  FinModule mm = minimal_presentation(MR);
  CHECK(mm.frame == 1);

  FinModule kk = tensor_modules(FinModule::residue_field(Q),
                                FinModule::residue_field(Q));
  CHECK(minimal_generators(kk) == 1);
  CHECK(module_length(kk).value == 1);

  // R/(x) (x) R/(y) = k over F_2[x,y]
  FinModule A = coker_from_rows(Q, {{"x"}});
  FinModule B = coker_from_rows(Q, {{"y"}});
  FinModule T = tensor_modules(A, B);
  CHECK(module_length(T).value == 1);
}

TEST_CASE("tensor symmetry of minimal frames (1000 cases)") {
  RingPtr rings[] = {ring_poly2(), ring_r3(), ring_r4()};
  int cases = 0;
  for (const auto& Q : rings) {
    const PolyRing& R = Q->poly_ring();
    Rng rng(11u + cases);
    for (int rep = 0; rep < 340; ++rep) {
      auto rand_mod = [&](int frame, int ncols) {
        std::vector<SVec> cols;
        for (int j = 0; j < ncols; ++j) {
          SVec col;
          for (int i = 0; i < frame; ++i) {
            Poly f = random_poly(rng, R, 2, 2);
            for (const auto& t : f.terms) col.push_back(VTerm{t.m, i, t.c});
          }
          col = svec_sorted(R, std::move(col));
          cols.push_back(Q->nf_vec(col));
        }
        return FinModule::cokernel(Q, frame, std::move(cols), "rnd");
      };
      FinModule M = rand_mod(1 + rng.below(2), rng.below(3));
      FinModule N = rand_mod(1 + rng.below(2), rng.below(3));
      FinModule MN = minimal_presentation(tensor_modules(M, N));
      FinModule NM = minimal_presentation(tensor_modules(N, M));
      REQUIRE(MN.frame == NM.frame);
      FinModule MNp = prune_relations(MN);
      FinModule NMp = prune_relations(NM);
      REQUIRE(MNp.rel.size() == NMp.rel.size());
      ++cases;
    }
  }
  CHECK(cases >= 1000);
}

TEST_CASE("koszul complex: rank-1 on F_2[x]/(x^2)") {
  auto R2 = ring_r2();
  const PolyRing& R = R2->poly_ring();
  ChainComplex K = koszul_complex(R2, {parse_poly(R, "x")});
  CHECK(K.lo == 0);
  CHECK(K.hi() == 1);
  CHECK(K.rank_at(0) == 1);
  CHECK(K.rank_at(1) == 1);
  // H_0 = k, H_1 = ann(x) = k
  CHECK(module_length(homology(K, 0)).value == 1);
  CHECK(module_length(homology(K, 1)).value == 1);
}

TEST_CASE("koszul complex: empty element list is the module itself") {
  auto Q = ring_poly1();
  FinModule M = FinModule::residue_field(Q);
  ChainComplex K = koszul_complex(Q, {}, M);
  CHECK(K.lo == 0);
  CHECK(K.hi() == 0);
  CHECK(module_length(homology(K, 0)).value == 1);
}

TEST_CASE("koszul complex: regular sequence x,y on F_2[x,y]") {
  auto Q = ring_poly2();
  const PolyRing& R = Q->poly_ring();
  ChainComplex K =
      koszul_complex(Q, {parse_poly(R, "x"), parse_poly(R, "y")});
  CHECK(K.rank_at(0) == 1);
  CHECK(K.rank_at(1) == 2);
  CHECK(K.rank_at(2) == 1);
  CHECK(module_length(homology(K, 0)).value == 1);  // H_0 = k
  CHECK(is_zero_module(homology(K, 1)));            // depth sensitivity
  CHECK(is_zero_module(homology(K, 2)));
}

TEST_CASE("koszul element must lie in m") {
  auto Q = ring_poly1();
  const PolyRing& R = Q->poly_ring();
  CHECK_THROWS_AS(koszul_complex(Q, {parse_poly(R, "x + 1")}), EngineError);
}

TEST_CASE("homology: exact complex has none in the middle") {
  auto Q = ring_poly1();
  const PolyRing& R = Q->poly_ring();
  Matrix id = Matrix::identity(R, 1);
  ChainComplex C = make_complex(Q, 0, {1, 1}, {id});
  CHECK(is_zero_module(homology(C, 0)));
  CHECK(is_zero_module(homology(C, 1)));
}

TEST_CASE("homology: R --x--> R over F_2[x]") {
  auto Q = ring_poly1();
  const PolyRing& R = Q->poly_ring();
  Matrix d;
  d.rows = 1;
  d.cols = {svec_from_poly(R, parse_poly(R, "x"))};
  ChainComplex C = make_complex(Q, 0, {1, 1}, {d});
  CHECK(module_length(homology(C, 0)).value == 1);  // k
  CHECK(is_zero_module(homology(C, 1)));            // x is a non-zerodivisor
}

TEST_CASE("tensor of complexes: unit and Koszul factorization") {
  auto Q = ring_poly2();
  const PolyRing& R = Q->poly_ring();
  ChainComplex Kx = koszul_complex(Q, {parse_poly(R, "x")});
  ChainComplex Ky = koszul_complex(Q, {parse_poly(R, "y")});
  ChainComplex unit = module_as_complex(FinModule::ring_module(Q));
  ChainComplex KxU = tensor_complexes(Kx, unit);
  CHECK(KxU.hi() == 1);
  CHECK(KxU.rank_at(0) == 1);
  CHECK(KxU.rank_at(1) == 1);

  ChainComplex Kxy =
      koszul_complex(Q, {parse_poly(R, "x"), parse_poly(R, "y")});
  ChainComplex T = tensor_complexes(Kx, Ky);
  for (int n = 0; n <= 2; ++n) {
    CHECK(T.rank_at(n) == Kxy.rank_at(n));
    CHECK(module_length(homology(T, n)).value ==
          module_length(homology(Kxy, n)).value);
  }
}

TEST_CASE("shift compatibility: (SC) (x) D == S(C (x) D)") {
  auto Q = ring_r3();
  const PolyRing& R = Q->poly_ring();
  ChainComplex C = koszul_complex(Q, {parse_poly(R, "x")});
  ChainComplex D =
      koszul_complex(Q, {parse_poly(R, "x + y"), parse_poly(R, "y")});
  ChainComplex lhs = tensor_complexes(shift_complex(C, 1), D);
  ChainComplex rhs = shift_complex(tensor_complexes(C, D), 1);
  REQUIRE(lhs.lo == rhs.lo);
  REQUIRE(lhs.ranks == rhs.ranks);
  REQUIRE(lhs.diffs.size() == rhs.diffs.size());
  for (size_t i = 0; i < lhs.diffs.size(); ++i) {
    REQUIRE(lhs.diffs[i].ncols() == rhs.diffs[i].ncols());
    for (int j = 0; j < lhs.diffs[i].ncols(); ++j)
      REQUIRE(lhs.diffs[i].cols[j] == rhs.diffs[i].cols[j]);
  }
}

TEST_CASE("d o d = 0 for random Koszul tensors (1000 cases)") {
  RingPtr rings[] = {ring_poly2(), ring_r3(), ring_r4()};
  int cases = 0;
  for (const auto& Q : rings) {
    const PolyRing& R = Q->poly_ring();
    Rng rng(5u * (cases + 3));
    for (int rep = 0; rep < 340; ++rep) {
      // random elements of m
      auto elem = [&]() {
        Poly f = random_poly(rng, R, 2, 2);
        std::vector<Term> ts;
        for (const auto& t : f.terms)
          if (!mon_is_one(t.m)) ts.push_back(t);
        return Q->nf(poly_from_terms(R, std::move(ts)));
      };
      std::vector<Poly> es;
      int ne = 1 + rng.below(2);
      for (int i = 0; i < ne; ++i) es.push_back(elem());
      // construction already asserts d o d == 0 mod I exactly
      ChainComplex K = koszul_complex(Q, es);
      ChainComplex T = tensor_complexes(K, K);
      for (int n = T.lo + 2; n <= T.hi(); ++n) {
        Matrix prod = matrix_multiply(R, T.diff_at(n - 1), T.diff_at(n));
        REQUIRE(matrix_is_zero(Q->nf_matrix(prod)));
      }
      ++cases;
    }
  }
  CHECK(cases >= 1000);
}

TEST_CASE("Koszul self-duality: dual has the homology of the shift") {
  // Hom-dual of K^R vs the e-shifted Koszul complex, on R2 and R4
  for (const auto& Q : {ring_r2(), ring_r4()}) {
    const PolyRing& R = Q->poly_ring();
    std::vector<Poly> vars;
    for (int i : Q->minimal_m_generator_indices())
      vars.push_back(poly_var(R, i));
    const int e = static_cast<int>(vars.size());
    ChainComplex K = koszul_complex(Q, vars);
    ChainComplex D = dual_complex(K);  // degrees [-e, 0]
    for (int n = -e; n <= 0; ++n) {
      auto ld = module_length(homology(D, n));
      auto lk = module_length(homology(K, n + e));
      REQUIRE(ld.finite);
      REQUIRE(lk.finite);
      REQUIRE(ld.value == lk.value);
    }
  }
}
