#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "common.hpp"
#include "polynomial.hpp"

using namespace rhobound;
using rhobound::testing::Rng;

namespace {

Polynomial random_poly(Rng &rng, int nvars, int max_terms, int coeff_abs) {
  Polynomial p;
  int terms = static_cast<int>(rng.range(0, max_terms));
  for (int i = 0; i < terms; ++i) {
    Monomial m;
    for (int v = 0; v < nvars; ++v) {
      int e = static_cast<int>(rng.range(0, 2));
      if (e > 0) m.emplace_back(v, e);
    }
    p.add_term(m, BigInt(rng.range(-coeff_abs, coeff_abs)));
  }
  return p;
}

}  // namespace

TEST_CASE("evaluation matches hand arithmetic") {
  Polynomial p = Polynomial::variable(0, BigInt(3));  // 3x
  std::map<int, BigInt> sigma{{0, BigInt(2)}};
  CHECK(poly_eval(p, sigma) == 6);

  CHECK(poly_eval(Polynomial(), sigma) == 0);

  // x*y - 2 at x=3, y=-4
  Polynomial q = Polynomial::variable(0) * Polynomial::variable(1) -
                 Polynomial::constant(BigInt(2));
  std::map<int, BigInt> s2{{0, BigInt(3)}, {1, BigInt(-4)}};
  CHECK(poly_eval(q, s2) == -14);
}

TEST_CASE("missing binding is a usage error") {
  Polynomial p = Polynomial::variable(7);
  std::map<int, BigInt> sigma;
  CHECK_THROWS_AS(poly_eval(p, sigma), std::invalid_argument);
}

TEST_CASE("canonical form: p + q - q == p") {
  Rng rng(42);
  for (int i = 0; i < 500; ++i) {
    Polynomial p = random_poly(rng, 3, 4, 9);
    Polynomial q = random_poly(rng, 3, 4, 9);
    CHECK(p + q - q == p);
  }
}

TEST_CASE("ceil_poly examples") {
  Polynomial x = Polynomial::variable(0), y = Polynomial::variable(1);
  CHECK(ceil_poly(x - y) == x + y);
  CHECK(ceil_poly(Polynomial()) == Polynomial());
  // -3x^2 + 2 -> 3x^2 + 2
  Polynomial p = (x * x).scaled(BigInt(-3)) + Polynomial::constant(BigInt(2));
  Polynomial want = (x * x).scaled(BigInt(3)) + Polynomial::constant(BigInt(2));
  CHECK(ceil_poly(p) == want);
}

TEST_CASE("ceil_poly soundness and monotonicity on random samples") {
  Rng rng(7);
  for (int i = 0; i < 1000; ++i) {
    Polynomial p = random_poly(rng, 2, 4, 9);
    std::map<int, BigInt> sigma, abs_sigma, abs_bigger;
    for (int v = 0; v < 2; ++v) {
      BigInt val(rng.range(-5, 5));
      sigma[v] = val;
      abs_sigma[v] = boost::multiprecision::abs(val);
      abs_bigger[v] = abs_sigma[v] + BigInt(rng.range(0, 3));
    }
    BigInt ceil_at_abs = poly_eval(ceil_poly(p), abs_sigma);
    CHECK(ceil_at_abs >= boost::multiprecision::abs(poly_eval(p, sigma)));
    CHECK(poly_eval(ceil_poly(p), abs_bigger) >= ceil_at_abs);
  }
}

TEST_CASE("linear decomposition") {
  Polynomial p = Polynomial::variable(0, BigInt(2)) + Polynomial::constant(BigInt(-3));
  auto dec = p.linear_decomp();
  REQUIRE(dec.has_value());
  CHECK(dec->first == -3);
  CHECK(dec->second.at(0) == 2);
  Polynomial q = Polynomial::variable(0) * Polynomial::variable(0);
  CHECK(!q.linear_decomp().has_value());
}

TEST_CASE("compose substitutes simultaneously") {
  Polynomial x = Polynomial::variable(0), y = Polynomial::variable(1);
  Polynomial p = x * y + x;
  Polynomial r = p.compose([&](int ind) -> std::optional<Polynomial> {
    if (ind == 0) return y;  // x := y
    if (ind == 1) return x;  // y := x
    return std::nullopt;
  });
  CHECK(r == y * x + y);
}
