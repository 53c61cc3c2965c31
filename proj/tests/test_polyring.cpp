#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "test_util.hpp"

using namespace phicurv;
using testutil::Rng;

namespace {

PolyRing F2xy() { return PolyRing::make(2, {"x", "y"}); }
PolyRing F3x() { return PolyRing::make(3, {"x"}); }

}  // namespace

TEST_CASE("grevlex order") {
  PolyRing R = F2xy();
  Monomial x2y{2, 1}, xy2{1, 2}, x{1, 0}, y{0, 1};
  CHECK(R.order.compare(x2y, xy2) > 0);
  CHECK(R.order.compare(x, y) > 0);
  CHECK(R.order.compare(x, x) == 0);
  // degree dominates
  CHECK(R.order.compare(Monomial{0, 3}, Monomial{2, 0}) > 0);

  // reversing the precedence swaps x and y
  MonomialOrder rev;
  rev.prec = {1, 0};
  CHECK(rev.compare(x, y) < 0);
}

TEST_CASE("multiply: freshman's dream in characteristic 2") {
  PolyRing R = F2xy();
  Poly f = parse_poly(R, "x + y");
  Poly p = multiply(R, f, f);
  CHECK(to_string(R, p) == "x^2 + y^2");
}

TEST_CASE("multiply: identity") {
  PolyRing R = F2xy();
  Poly f = parse_poly(R, "x^2*y + x + 1");
  CHECK(multiply(R, f, poly_const(R, 1)) == f);
}

TEST_CASE("multiply: (x+1)^3 = x^3 + 1 over F_3") {
  PolyRing R = F3x();
  Poly f = parse_poly(R, "x + 1");
  Poly cube = multiply(R, multiply(R, f, f), f);
  CHECK(to_string(R, cube) == "x^3 + 1");
}

TEST_CASE("multiply: arity mismatch") {
  PolyRing R = F2xy();
  PolyRing S = F3x();
  Poly f = parse_poly(R, "x + y");
  Poly g = parse_poly(S, "x");
  CHECK_THROWS_AS(multiply(R, f, g), EngineError);
}

TEST_CASE("substitute") {
  PolyRing R = F2xy();
  Poly f = parse_poly(R, "x + y");
  std::vector<Poly> images{parse_poly(R, "x^2"), parse_poly(R, "y^2")};
  CHECK(to_string(R, substitute(R, f, images)) == "x^2 + y^2");

  Poly c = poly_const(R, 1);
  CHECK(substitute(R, c, images) == c);

  PolyRing R3 = PolyRing::make(3, {"x", "y"});
  Poly xy = parse_poly(R3, "x*y");
  std::vector<Poly> cubes{parse_poly(R3, "x^3"), parse_poly(R3, "y^3")};
  CHECK(to_string(R3, substitute(R3, xy, cubes)) == "x^3*y^3");

  CHECK_THROWS_AS(substitute(R, f, {parse_poly(R, "x")}), EngineError);
}

TEST_CASE("frobenius_apply") {
  PolyRing R = F2xy();
  Poly f = parse_poly(R, "x + y");
  CHECK(to_string(R, frobenius_apply(R, f, 1)) == "x^2 + y^2");
  CHECK(frobenius_apply(R, poly_const(R, 1), 3) == poly_const(R, 1));

  PolyRing Rx = PolyRing::make(2, {"x"});
  Poly g = parse_poly(Rx, "x^2 + x");
  CHECK(to_string(Rx, frobenius_apply(Rx, g, 2)) == "x^8 + x^4");
}

TEST_CASE("frobenius additivity and substitution identity (1000 cases)") {
  for (uint32_t p : {2u, 3u, 5u}) {
    PolyRing R = PolyRing::make(p, {"x", "y", "z"});
    Rng rng(41u + p);
    std::vector<Poly> powers;
    for (int e = 1; e <= 2; ++e) {
      int64_t q = 1;
      for (int i = 0; i < e; ++i) q *= p;
      for (int rep = 0; rep < 170; ++rep) {
        Poly f = testutil::random_poly(rng, R);
        Poly g = testutil::random_poly(rng, R);
        Poly lhs = frobenius_apply(R, add(R, f, g), e);
        Poly rhs = add(R, frobenius_apply(R, f, e), frobenius_apply(R, g, e));
        REQUIRE(lhs == rhs);
        std::vector<Poly> images;
        for (int i = 0; i < R.nvars(); ++i)
          images.push_back(poly_pow(R, poly_var(R, i), q));
        REQUIRE(frobenius_apply(R, f, e) == substitute(R, f, images));
      }
    }
  }
}

TEST_CASE("multiply is associative and commutative (1000+ cases)") {
  for (uint32_t p : {2u, 3u, 5u}) {
    PolyRing R = PolyRing::make(p, {"x", "y"});
    Rng rng(97u * p);
    for (int rep = 0; rep < 340; ++rep) {
      Poly f = testutil::random_poly(rng, R, 3, 2);
      Poly g = testutil::random_poly(rng, R, 3, 2);
      Poly h = testutil::random_poly(rng, R, 3, 2);
      REQUIRE(multiply(R, f, g) == multiply(R, g, f));
      REQUIRE(multiply(R, multiply(R, f, g), h) ==
              multiply(R, f, multiply(R, g, h)));
    }
  }
}

TEST_CASE("parse and print round trip") {
  PolyRing R = F2xy();
  for (const char* s :
       {"x^2 + y^2", "x*y", "x + y + 1", "x^3*y^2 + x*y + 1", "0"}) {
    if (std::string(s) == "0") continue;
    Poly f = parse_poly(R, s);
    CHECK(parse_poly(R, to_string(R, f)) == f);
  }
  // coefficient folding
  PolyRing R5 = PolyRing::make(5, {"x"});
  CHECK(to_string(R5, parse_poly(R5, "3*x + 4*x")) == "2*x");
  CHECK(parse_poly(R5, "5*x").is_zero());
}

TEST_CASE("parse errors carry offsets") {
  PolyRing R = F2xy();
  CHECK_THROWS_AS(parse_poly(R, "x + w"), EngineError);
  CHECK_THROWS_AS(parse_poly(R, ""), EngineError);
  CHECK_THROWS_AS(parse_poly(R, "x +"), EngineError);
  CHECK_THROWS_AS(parse_poly(R, "x ^"), EngineError);
}

TEST_CASE("homogeneity under weights") {
  PolyRing R = F2xy();
  CHECK(is_homogeneous(R, parse_poly(R, "x^2 + y^2")));
  CHECK_FALSE(is_homogeneous(R, parse_poly(R, "x + x^2")));
  PolyRing W = PolyRing::make(2, {"a", "b"}, {2, 3});
  CHECK(is_homogeneous(W, parse_poly(W, "a^3 + b^2")));
  CHECK_FALSE(is_homogeneous(W, parse_poly(W, "a + b")));
}

TEST_CASE("exponent overflow guard") {
  PolyRing R = PolyRing::make(2, {"x"});
  Poly f = parse_poly(R, "x");
  CHECK_THROWS_AS(frobenius_apply(R, f, 40), EngineError);
}
