#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bound.hpp"
#include "common.hpp"

using namespace rhobound;
using rhobound::testing::Rng;

namespace {

// a, x, y as variable ids 0, 1, 2
const int A = 0, X = 1, Y = 2;

BoundPtr x_pow_x() { return b_pow(Polynomial::variable(X), b_var(X)); }

std::vector<BigInt> vals(long long a, long long x, long long y) {
  return {BigInt(a), BigInt(x), BigInt(y)};
}

// Random bounds for the property tests; Pow bases stay polynomial and
// Log bases are 2 or 3/2.
BoundPtr random_bound(Rng &rng, int depth) {
  int pick = static_cast<int>(rng.range(0, depth <= 0 ? 1 : 6));
  switch (pick) {
    case 0:
      return b_const(BigInt(rng.range(0, 9)));
    case 1:
      return b_var(static_cast<int>(rng.range(0, 2)));
    case 2:
      return b_sum(random_bound(rng, depth - 1), random_bound(rng, depth - 1));
    case 3:
      return b_max(random_bound(rng, depth - 1), random_bound(rng, depth - 1));
    case 4:
      return b_prod(random_bound(rng, depth - 1), random_bound(rng, depth - 1));
    case 5: {
      Polynomial base = Polynomial::constant(BigInt(rng.range(0, 3))) +
                        Polynomial::variable(static_cast<int>(rng.range(0, 2)),
                                             BigInt(rng.range(0, 2)));
      return b_pow(base, random_bound(rng, depth - 1));
    }
    default:
      return b_log(rng.range(0, 1) ? Rational(2) : Rational(3, 2),
                   random_bound(rng, depth - 1));
  }
}

// Polynomial-valued random bound (for substitution maps).
BoundPtr random_poly_bound(Rng &rng, int depth) {
  int pick = static_cast<int>(rng.range(0, depth <= 0 ? 1 : 3));
  switch (pick) {
    case 0:
      return b_const(BigInt(rng.range(0, 5)));
    case 1:
      return b_var(static_cast<int>(rng.range(0, 2)));
    case 2:
      return b_sum(random_poly_bound(rng, depth - 1), random_poly_bound(rng, depth - 1));
    default:
      return b_prod(random_poly_bound(rng, depth - 1), random_poly_bound(rng, depth - 1));
  }
}

}  // namespace

TEST_CASE("evaluation follows the rounding rule") {
  // log2(y + x*x^x) + 2 at x=2, y=0: log2(0 + 2*4) + 2 = 3 + 2 = 5
  BoundPtr b = b_sum(b_log(Rational(2), b_sum(b_var(Y), b_prod(b_var(X), x_pow_x()))),
                     b_const(BigInt(2)));
  CHECK(eval_bound(b, vals(0, 2, 0)) == NatOmega(BigInt(5)));

  CHECK(eval_bound(b_omega(), vals(0, 0, 0)).is_omega());

  // log2(max{1, 0}) = 0
  CHECK(eval_bound(b_log(Rational(2), b_var(Y)), vals(0, 0, 0)) == NatOmega(BigInt(0)));

  // 0^0 = 1
  CHECK(eval_bound(b_pow(Polynomial::variable(X), b_var(X)), vals(0, 0, 0)) ==
        NatOmega(BigInt(1)));

  CHECK_THROWS_AS(eval_bound(b_var(X), vals(0, -1, 0)), std::invalid_argument);
}

TEST_CASE("omega arithmetic conventions") {
  CHECK((NatOmega(BigInt(0)) * NatOmega::omega()).is_zero());
  CHECK((NatOmega(BigInt(3)) * NatOmega::omega()).is_omega());
  CHECK(NatOmega::ceil_log(Rational(2), NatOmega::omega()).is_omega());
  CHECK(NatOmega::pow(NatOmega(BigInt(1)), NatOmega::omega()) == NatOmega(BigInt(1)));
  CHECK(NatOmega::pow(NatOmega(BigInt(0)), NatOmega::omega()).is_zero());
  CHECK(NatOmega::pow(NatOmega(BigInt(2)), NatOmega::omega()).is_omega());
}

TEST_CASE("substitution examples") {
  // subst(a*a, a -> x) = x*x, as in lifting RB(t5)
  BoundPtr sq = b_prod(b_var(A), b_var(A));
  BoundPtr got = subst(sq, {{A, b_var(X)}});
  CHECK(bound_equal(simplify(got), simplify(b_prod(b_var(X), b_var(X)))));

  BoundPtr b = b_sum(b_log(Rational(2), b_var(Y)), b_const(BigInt(2)));
  CHECK(bound_equal(subst(b, {}), b));

  // subst(log2(y)+2, y -> y + x*x^x) = log2(y + x*x^x) + 2
  BoundPtr repl = b_sum(b_var(Y), b_prod(b_var(X), x_pow_x()));
  BoundPtr want = b_sum(b_log(Rational(2), repl), b_const(BigInt(2)));
  CHECK(bound_equal(simplify(subst(b, {{Y, repl}})), simplify(want)));
}

TEST_CASE("substitution into Pow bases folds polynomials or over-approximates") {
  BoundPtr p = b_pow(Polynomial::variable(X), b_var(A));
  // x := y + 1 keeps the Pow structure with a composed base.
  BoundPtr folded = subst(p, {{X, b_sum(b_var(Y), b_const(BigInt(1)))}});
  REQUIRE(folded->kind == BKind::Pow);
  CHECK(folded->base == Polynomial::variable(Y) + Polynomial::constant(BigInt(1)));
  // A non-polynomial replacement collapses to ω.
  BoundPtr lost = subst(p, {{X, b_log(Rational(2), b_var(Y))}});
  CHECK(is_omega_bound(lost));
}

TEST_CASE("simplification examples") {
  CHECK(bound_equal(simplify(b_sum(b_const(BigInt(0)), b_var(X))), b_var(X)));
  // a * 1^a = a  (the rho-RF local bound shape)
  BoundPtr one_pow = b_pow(Polynomial::constant(BigInt(1)), b_var(A));
  CHECK(bound_equal(simplify(b_prod(b_var(A), one_pow)), b_var(A)));
  CHECK(bound_equal(simplify(b_max(b_const(BigInt(2)), b_const(BigInt(5)))),
                    b_const(BigInt(5))));
  CHECK(bound_equal(simplify(b_prod(b_const(BigInt(0)), b_var(X))), b_const(BigInt(0))));
  // max(y, y + x) collapses since summands are nonnegative
  BoundPtr m = b_max(b_var(Y), b_sum(b_var(Y), b_var(X)));
  CHECK(bound_equal(simplify(m), simplify(b_sum(b_var(Y), b_var(X)))));
}

TEST_CASE("simplify is idempotent and sound on random bounds") {
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    BoundPtr b = random_bound(rng, 3);
    BoundPtr s = simplify(b);
    CHECK(bound_equal(simplify(s), s));
    std::vector<BigInt> v = {BigInt(rng.range(0, 8)), BigInt(rng.range(0, 8)),
                             BigInt(rng.range(0, 8))};
    CHECK(eval_bound(b, v) == eval_bound(s, v));
  }
}

TEST_CASE("monotonicity on random bounds") {
  Rng rng(6);
  for (int i = 0; i < 1000; ++i) {
    BoundPtr b = random_bound(rng, 3);
    std::vector<BigInt> lo, hi;
    for (int v = 0; v < 3; ++v) {
      BigInt l(rng.range(0, 10));
      lo.push_back(l);
      hi.push_back(l + BigInt(rng.range(0, 6)));
    }
    CHECK(eval_bound(b, lo) <= eval_bound(b, hi));
  }
}

TEST_CASE("subst/eval commutation with polynomial replacements") {
  Rng rng(8);
  for (int i = 0; i < 1000; ++i) {
    BoundPtr b = random_bound(rng, 3);
    std::map<int, BoundPtr> m;
    for (int v = 0; v < 3; ++v)
      if (rng.range(0, 1)) m[v] = random_poly_bound(rng, 2);
    std::vector<BigInt> sigma = {BigInt(rng.range(0, 6)), BigInt(rng.range(0, 6)),
                                 BigInt(rng.range(0, 6))};
    std::vector<BigInt> sigma2 = sigma;
    for (auto &[v, repl] : m) sigma2[v] = eval_bound(repl, sigma).value();
    CHECK(eval_bound(subst(b, m), sigma) == eval_bound(b, sigma2));
  }
}

TEST_CASE("log rounding always yields naturals") {
  Rng rng(9);
  for (int i = 0; i < 1000; ++i) {
    BoundPtr b = b_log(rng.range(0, 1) ? Rational(2) : Rational(5, 2), random_bound(rng, 2));
    std::vector<BigInt> v = {BigInt(rng.range(0, 30)), BigInt(rng.range(0, 30)),
                             BigInt(rng.range(0, 30))};
    NatOmega r = eval_bound(b, v);
    if (r.is_finite()) CHECK(r.value() >= 0);
  }
}

TEST_CASE("asymptotic classes") {
  CHECK(asymptotic_class(b_prod(b_var(X), b_var(X))).cls == AsymClass::Poly);
  CHECK(asymptotic_class(b_prod(b_var(X), b_var(X))).poly_degree == 2);
  CHECK(asymptotic_class(b_const(BigInt(7))).cls == AsymClass::Const);
  CHECK(asymptotic_class(b_omega()).cls == AsymClass::Omega);
  CHECK(asymptotic_class(x_pow_x()).cls == AsymClass::Exp);
  CHECK(asymptotic_class(b_log(Rational(2), b_var(Y))).cls == AsymClass::Log);

  // log2(y + x*x^x) is poly-log, and adding x^2 dominates to Poly(2).
  BoundPtr lg = b_log(Rational(2), b_sum(b_var(Y), b_prod(b_var(X), x_pow_x())));
  CHECK(asymptotic_class(lg).cls == AsymClass::PolyLog);
  BoundPtr total = b_sum(lg, b_prod(b_var(X), b_var(X)));
  AsymResult cls = asymptotic_class(total);
  CHECK(cls.cls == AsymClass::Poly);
  CHECK(cls.poly_degree == 2);
  CHECK(cls.worst_case_token() == "n^2");
}

TEST_CASE("classification never under-reports empirically") {
  Rng rng(10);
  for (int i = 0; i < 400; ++i) {
    BoundPtr b = random_bound(rng, 3);
    AsymResult cls = asymptotic_class(b);
    if (cls.cls != AsymClass::Poly) continue;
    unsigned k = cls.poly_degree;
    // eval at n = 2^i should be O(2^{ik}): compare against the claim with a
    // generous constant from the small-n samples.
    NatOmega base = eval_bound(b, std::vector<BigInt>(3, BigInt(2)));
    if (!base.is_finite()) continue;
    BigInt c = base.value() + 1;
    for (int e = 1; e <= 6; ++e) {
      BigInt n = BigInt(1) << e;
      NatOmega v = eval_bound(b, std::vector<BigInt>(3, n));
      BigInt cap = c;
      for (unsigned j = 0; j < k; ++j) cap *= n;
      REQUIRE(v.is_finite());
      CHECK(v.value() <= cap);
    }
  }
}

TEST_CASE("rendering is deterministic and readable") {
  auto namer = [](int v) { return std::string(1, "axy"[v]); };
  BoundPtr b = simplify(b_sum(b_log(Rational(2), b_sum(b_var(Y), b_prod(b_var(X), x_pow_x()))),
                              b_const(BigInt(2))));
  std::string s = bound_str(b, namer);
  CHECK(s.find("log2(") != std::string::npos);
  CHECK(s.find("x^x") != std::string::npos);
  CHECK(bound_str(b, namer) == s);
}
