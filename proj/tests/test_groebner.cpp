#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "test_util.hpp"

using namespace phicurv;
using testutil::Rng;

namespace {

PolyRing F2xy() { return PolyRing::make(2, {"x", "y"}); }

std::vector<SVec> ideal_gens(const PolyRing& R,
                             const std::vector<std::string>& ss) {
  std::vector<SVec> out;
  for (const auto& s : ss) out.push_back(svec_from_poly(R, parse_poly(R, s)));
  return out;
}

bool gb_contains(const PolyRing& R, const GroebnerBasis& G,
                 const std::string& s) {
  SVec v = svec_from_poly(R, parse_poly(R, s));
  for (const auto& g : G.gens)
    if (g == v) return true;
  return false;
}

}  // namespace

TEST_CASE("buchberger: already reduced monomial ideal") {
  PolyRing R = F2xy();
  GroebnerBasis G = buchberger(R, ideal_gens(R, {"x^2", "x*y"}), 1);
  CHECK(G.gens.size() == 2);
  CHECK(gb_contains(R, G, "x^2"));
  CHECK(gb_contains(R, G, "x*y"));
  CHECK(G.reduced);
}

TEST_CASE("buchberger: principal ideal") {
  PolyRing R = F2xy();
  GroebnerBasis G = buchberger(R, ideal_gens(R, {"x"}), 1);
  CHECK(G.gens.size() == 1);
  CHECK(gb_contains(R, G, "x"));
}

TEST_CASE("buchberger: S-pair produces y^3") {
  // {x^2 + y^2, x*y} in F_2[x,y]: the S-polynomial reduces to y^3
  PolyRing R = F2xy();
  GroebnerBasis G = buchberger(R, ideal_gens(R, {"x^2 + y^2", "x*y"}), 1);
  CHECK(gb_contains(R, G, "y^3"));
  CHECK(gb_contains(R, G, "x^2 + y^2"));
  CHECK(gb_contains(R, G, "x*y"));
}

TEST_CASE("normal_form basics") {
  PolyRing R = PolyRing::make(2, {"x"});
  GroebnerBasis G = buchberger(R, ideal_gens(R, {"x^2"}), 1);
  SVec v = svec_from_poly(R, parse_poly(R, "x^2 + x"));
  SVec r = normal_form(R, v, G);
  CHECK(svec_component(R, r, 0) == parse_poly(R, "x"));

  // elements of the span reduce to zero
  SVec w = svec_from_poly(R, parse_poly(R, "x^3 + x^2"));
  CHECK(normal_form(R, w, G).empty());
}

TEST_CASE("normal_form: x^3*y in (x^2, x*y)") {
  PolyRing R = F2xy();
  GroebnerBasis G = buchberger(R, ideal_gens(R, {"x^2", "x*y"}), 1);
  SVec v = svec_from_poly(R, parse_poly(R, "x^3*y"));
  CHECK(normal_form(R, v, G).empty());
}

TEST_CASE("normal_form membership property (1000+ cases)") {
  PolyRing R = F2xy();
  PolyRing R3 = PolyRing::make(3, {"x", "y"});
  int cases = 0;
  for (const PolyRing* Rp : {&R, &R3}) {
    Rng rng(2024);
    GroebnerBasis G =
        buchberger(*Rp, ideal_gens(*Rp, {"x^2 + y^2", "x*y"}), 1);
    for (int rep = 0; rep < 520; ++rep) {
      // random combinations of the basis must reduce to zero
      SVec acc;
      for (const auto& g : G.gens) {
        Poly c = testutil::random_poly(rng, *Rp, 2, 2);
        acc = svec_add(*Rp, acc, svec_mul_poly(*Rp, g, c));
      }
      REQUIRE(normal_form(*Rp, acc, G).empty());
      // and adding a standard monomial makes it nonzero
      SVec probe = svec_add(*Rp, acc, svec_from_poly(*Rp, poly_var(*Rp, 1)));
      REQUIRE_FALSE(normal_form(*Rp, probe, G).empty());
      ++cases;
    }
  }
  CHECK(cases >= 1000);
}

TEST_CASE("syzygies: Koszul relation for [x y]") {
  PolyRing R = F2xy();
  std::vector<SVec> cols = {svec_from_poly(R, parse_poly(R, "x")),
                            svec_from_poly(R, parse_poly(R, "y"))};
  auto syz = syzygies(R, cols, 1);
  REQUIRE(!syz.empty());
  // every syzygy annihilates the input exactly
  for (const auto& s : syz) {
    SVec acc;
    for (const auto& t : s)
      acc = svec_add(R, acc, svec_mul_term(R, cols[t.pos], t.m, t.c));
    REQUIRE(acc.empty());
  }
  // the Koszul syzygy (y, x) is in the span: check membership
  GroebnerBasis S = buchberger(R, syz, 2);
  SVec koszul = svec_sorted(
      R, SVec{VTerm{Monomial{0, 1}, 0, 1}, VTerm{Monomial{1, 0}, 1, 1}});
  CHECK(normal_form(R, koszul, S).empty());
}

TEST_CASE("syzygies: identity matrix has none") {
  PolyRing R = F2xy();
  std::vector<SVec> cols = {SVec{VTerm{mon_one(2), 0, 1}},
                            SVec{VTerm{mon_one(2), 1, 1}}};
  auto syz = syzygies(R, cols, 2);
  CHECK(syz.empty());
}

TEST_CASE("syzygies over quotient ring: ann(x) = (x) in F_2[x]/(x^2)") {
  RingPtr R2 = testutil::ring_r2();
  const PolyRing& R = R2->poly_ring();
  std::vector<SVec> cols = {svec_from_poly(R, parse_poly(R, "x"))};
  auto syz = R2->syzygies_over(cols, 1);
  REQUIRE(!syz.empty());
  GroebnerBasis S = R2->module_gb(syz, 1);
  // x is a syzygy, 1 is not
  CHECK(normal_form(R, svec_from_poly(R, parse_poly(R, "x")), S).empty());
  CHECK_FALSE(normal_form(R, svec_from_poly(R, poly_const(R, 1)), S).empty());
}

TEST_CASE("syzygy composition is exactly zero (property, 1000 cases)") {
  RingPtr rings[] = {testutil::ring_poly2(), testutil::ring_r3(),
                     testutil::ring_r4()};
  int cases = 0;
  for (const auto& Q : rings) {
    const PolyRing& R = Q->poly_ring();
    Rng rng(7 + cases);
    for (int rep = 0; rep < 340; ++rep) {
      int rank = 1 + rng.below(2);
      int ncols = 1 + rng.below(3);
      std::vector<SVec> cols;
      for (int j = 0; j < ncols; ++j) {
        SVec col;
        for (int i = 0; i < rank; ++i) {
          Poly f = testutil::random_poly(rng, R, 2, 2);
          for (const auto& t : f.terms) col.push_back(VTerm{t.m, i, t.c});
        }
        cols.push_back(Q->nf_vec(svec_sorted(R, std::move(col))));
      }
      auto syz = Q->syzygies_over(cols, rank);
      for (const auto& s : syz) {
        SVec acc;
        for (const auto& t : s)
          acc = svec_add(R, acc, svec_mul_term(R, cols[t.pos], t.m, t.c));
        REQUIRE(Q->nf_vec(acc).empty());
      }
      ++cases;
    }
  }
  CHECK(cases >= 1000);
}

TEST_CASE("length_of_quotient") {
  PolyRing Rx = PolyRing::make(2, {"x"});
  GroebnerBasis G = buchberger(Rx, ideal_gens(Rx, {"x^2"}), 1);
  auto l = length_of_quotient(Rx, G, 1);
  CHECK(l.finite);
  CHECK(l.value == 2);

  GroebnerBasis Gk = buchberger(Rx, ideal_gens(Rx, {"x"}), 1);
  auto lk = length_of_quotient(Rx, Gk, 1);
  CHECK(lk.finite);
  CHECK(lk.value == 1);

  PolyRing R = F2xy();
  GroebnerBasis G4 = buchberger(R, ideal_gens(R, {"x^2", "x*y", "y^2"}), 1);
  auto l4 = length_of_quotient(R, G4, 1);
  CHECK(l4.finite);
  CHECK(l4.value == 3);

  // infinite quotient: no pure power of y
  GroebnerBasis Gi = buchberger(R, ideal_gens(R, {"x"}), 1);
  CHECK_FALSE(length_of_quotient(R, Gi, 1).finite);
}

TEST_CASE("determinism: identical runs give identical bases") {
  PolyRing R = F2xy();
  auto gens = ideal_gens(R, {"x^2 + y^2", "x*y", "y^3 + x^2*y"});
  GroebnerBasis a = buchberger(R, gens, 1);
  GroebnerBasis b = buchberger(R, gens, 1);
  REQUIRE(a.gens.size() == b.gens.size());
  for (size_t i = 0; i < a.gens.size(); ++i) REQUIRE(a.gens[i] == b.gens[i]);
}
