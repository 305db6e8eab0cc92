#pragma once

#include "numeric.hpp"

#include <map>
#include <vector>

namespace rhobound {

// Linear constraint Σ coeffs[i]·x_i REL rhs over nonnegative rational
// variables (callers encode free variables as differences of two).
struct LinConstraint {
  enum class Rel { Le, Ge, Eq };
  std::map<int, Rational> coeffs;
  Rel rel = Rel::Le;
  Rational rhs = 0;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  std::map<int, Rational> model;
  Rational objective = 0;
};

// Exact two-phase simplex with Bland's rule; minimizes the objective.
LpResult lp_minimize(const std::vector<LinConstraint> &cons,
                     const std::map<int, Rational> &objective);
LpResult lp_feasible(const std::vector<LinConstraint> &cons);

}  // namespace rhobound
