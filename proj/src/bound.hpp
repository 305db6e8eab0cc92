#pragma once

#include "polynomial.hpp"

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace rhobound {

// Weakly monotone bound expressions over N ∪ {ω}:
//   Const n | Var v | Sum | Max | Prod | Pow(p, b) with p ∈ N[V] | Log_k(b), k ∈ Q, k > 1.
// Log evaluates as ⌈log_k(max{1, ·})⌉ so every bound is N-valued.
class BoundNode;
using BoundPtr = std::shared_ptr<const BoundNode>;

enum class BKind { Const, Var, Sum, Max, Prod, Pow, Log };

class BoundNode {
 public:
  BKind kind;
  NatOmega cval;              // Const
  int var = -1;               // Var
  std::vector<BoundPtr> kids; // Sum / Max / Prod operands
  Polynomial base;            // Pow base, nonnegative coefficients
  BoundPtr sub;               // Pow exponent or Log argument
  Rational logbase;           // Log base, > 1
};

BoundPtr b_const(BigInt n);
BoundPtr b_const(const NatOmega &n);
BoundPtr b_omega();
BoundPtr b_var(int v);
BoundPtr b_sum(std::vector<BoundPtr> kids);
BoundPtr b_sum(BoundPtr a, BoundPtr b);
BoundPtr b_max(std::vector<BoundPtr> kids);
BoundPtr b_max(BoundPtr a, BoundPtr b);
BoundPtr b_prod(std::vector<BoundPtr> kids);
BoundPtr b_prod(BoundPtr a, BoundPtr b);
BoundPtr b_pow(Polynomial base, BoundPtr exp);  // base must have coefficients >= 0
BoundPtr b_log(Rational k, BoundPtr arg);
// Nonnegative-coefficient polynomial as a bound.
BoundPtr b_from_poly(const Polynomial &p);

// Evaluation over N ∪ {ω}; values must be nonnegative.
NatOmega eval_bound(const BoundPtr &b, const std::function<BigInt(int)> &value_of);
NatOmega eval_bound(const BoundPtr &b, const std::vector<BigInt> &values);

// Simultaneous substitution of variables by bounds. A Pow base whose
// variable is replaced by a non-polynomial bound over-approximates to ω.
BoundPtr subst(const BoundPtr &b, const std::map<int, BoundPtr> &m);

// Pointwise-equal normal form; idempotent and deterministic.
BoundPtr simplify(const BoundPtr &b);

// Structural total order / equality on simplified bounds.
int bound_cmp(const BoundPtr &a, const BoundPtr &b);
bool bound_equal(const BoundPtr &a, const BoundPtr &b);

// Convert back to a polynomial with natural coefficients when possible.
std::optional<Polynomial> bound_to_poly(const BoundPtr &b);

bool is_omega_bound(const BoundPtr &b);
bool is_const_bound(const BoundPtr &b);

// Asymptotic class of n ↦ eval(b, all variables := n). Structural and
// possibly over-reporting, never under-reporting.
enum class AsymClass { Const, Log, Poly, PolyLog, Exp, Omega };
struct AsymResult {
  AsymClass cls = AsymClass::Const;
  unsigned poly_degree = 0;  // for Poly / PolyLog
  unsigned log_degree = 0;   // for Log / PolyLog
  std::string str() const;
  // TermComp-style complexity token: 1, log(n), n, n^2, ..., EXP, ?
  std::string worst_case_token() const;
};
AsymResult asymptotic_class(const BoundPtr &b);

std::string bound_str(const BoundPtr &b, const std::function<std::string(int)> &namer);

}  // namespace rhobound
