#include "simplex.hpp"

#include <algorithm>
#include <stdexcept>

namespace rhobound {

namespace {

// Dense tableau: rows of basic equalities, one cost row. Column 0..n-1 are
// variables, the last column is the right-hand side.
struct Tableau {
  std::vector<std::vector<Rational>> rows;
  std::vector<Rational> cost;  // reduced costs, cost.back() = -objective value
  std::vector<int> basis;      // column basic in each row

  size_t ncols() const { return cost.size() - 1; }

  void pivot(size_t r, size_t c) {
    Rational p = rows[r][c];
    for (auto &v : rows[r]) v /= p;
    for (size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      Rational f = rows[i][c];
      for (size_t j = 0; j < rows[i].size(); ++j) rows[i][j] -= f * rows[r][j];
    }
    if (cost[c] != 0) {
      Rational f = cost[c];
      for (size_t j = 0; j < cost.size(); ++j) cost[j] -= f * rows[r][j];
    }
    basis[r] = static_cast<int>(c);
  }

  // Bland's rule; returns false when optimal, throws on unbounded.
  bool step(const std::vector<bool> &allowed) {
    size_t enter = ncols();
    for (size_t j = 0; j < ncols(); ++j) {
      if (allowed[j] && cost[j] < 0) {
        enter = j;
        break;
      }
    }
    if (enter == ncols()) return false;
    size_t leave = rows.size();
    Rational best = 0;
    for (size_t i = 0; i < rows.size(); ++i) {
      if (rows[i][enter] <= 0) continue;
      Rational ratio = rows[i].back() / rows[i][enter];
      if (leave == rows.size() || ratio < best ||
          (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == rows.size()) throw LpStatus::Unbounded;
    pivot(leave, enter);
    return true;
  }
};

}  // namespace

LpResult lp_minimize(const std::vector<LinConstraint> &cons,
                     const std::map<int, Rational> &objective) {
  // Map external variable ids to columns.
  std::map<int, size_t> col_of;
  auto touch = [&](int v) {
    if (!col_of.count(v)) {
      size_t c = col_of.size();
      col_of[v] = c;
    }
  };
  for (const auto &c : cons)
    for (const auto &[v, q] : c.coeffs) touch(v);
  for (const auto &[v, q] : objective) touch(v);

  size_t nstruct = col_of.size();
  size_t nslack = 0;
  for (const auto &c : cons)
    if (c.rel != LinConstraint::Rel::Eq) ++nslack;

  size_t m = cons.size();
  size_t total = nstruct + nslack + m;  // artificials for every row, unused ones stay 0
  Tableau tab;
  tab.rows.assign(m, std::vector<Rational>(total + 1, Rational(0)));
  tab.basis.assign(m, -1);

  size_t slack_at = nstruct;
  std::vector<bool> is_artificial(total, false);
  for (size_t i = 0; i < m; ++i) {
    const LinConstraint &c = cons[i];
    Rational sign = 1;
    Rational rhs = c.rhs;
    // Normalize to b >= 0.
    Rational slack_coeff = 0;
    if (c.rel == LinConstraint::Rel::Le) slack_coeff = 1;
    if (c.rel == LinConstraint::Rel::Ge) slack_coeff = -1;
    if (rhs < 0) {
      sign = -1;
      rhs = -rhs;
      slack_coeff = -slack_coeff;
    }
    for (const auto &[v, q] : c.coeffs) tab.rows[i][col_of[v]] = sign * q;
    size_t slack_col = 0;
    if (c.rel != LinConstraint::Rel::Eq) {
      slack_col = slack_at++;
      tab.rows[i][slack_col] = slack_coeff;
    }
    tab.rows[i][total] = rhs;
    if (c.rel != LinConstraint::Rel::Eq && slack_coeff == 1) {
      tab.basis[i] = static_cast<int>(slack_col);
    } else {
      size_t art = nstruct + nslack + i;
      tab.rows[i][art] = 1;
      tab.basis[i] = static_cast<int>(art);
      is_artificial[art] = true;
    }
  }

  LpResult res;
  try {
    // Phase 1: minimize the sum of artificials.
    tab.cost.assign(total + 1, Rational(0));
    for (size_t j = 0; j < total; ++j)
      if (is_artificial[j]) tab.cost[j] = 1;
    for (size_t i = 0; i < m; ++i) {
      if (is_artificial[static_cast<size_t>(tab.basis[i])]) {
        for (size_t j = 0; j <= total; ++j) tab.cost[j] -= tab.rows[i][j];
      }
    }
    std::vector<bool> allowed(total, true);
    while (tab.step(allowed)) {
    }
    if (-tab.cost[total] != 0) {
      res.status = LpStatus::Infeasible;
      return res;
    }
    // Pivot remaining artificials out of the basis.
    for (size_t i = 0; i < m; ++i) {
      if (!is_artificial[static_cast<size_t>(tab.basis[i])]) continue;
      size_t c = total;
      for (size_t j = 0; j < total; ++j) {
        if (!is_artificial[j] && tab.rows[i][j] != 0) {
          c = j;
          break;
        }
      }
      if (c < total) tab.pivot(i, c);
      // A fully zero row is redundant; leaving the artificial basic at 0 is
      // harmless since its column is barred from entering below.
    }

    // Phase 2.
    tab.cost.assign(total + 1, Rational(0));
    for (const auto &[v, q] : objective) tab.cost[col_of[v]] = q;
    for (size_t i = 0; i < m; ++i) {
      size_t b = static_cast<size_t>(tab.basis[i]);
      if (tab.cost[b] != 0) {
        Rational f = tab.cost[b];
        for (size_t j = 0; j <= total; ++j) tab.cost[j] -= f * tab.rows[i][j];
      }
    }
    for (size_t j = 0; j < total; ++j) allowed[j] = !is_artificial[j];
    while (tab.step(allowed)) {
    }
  } catch (LpStatus s) {
    res.status = s;
    return res;
  }

  res.status = LpStatus::Optimal;
  res.objective = -tab.cost[total];
  for (const auto &[v, c] : col_of) res.model[v] = 0;
  for (size_t i = 0; i < m; ++i) {
    for (const auto &[v, c] : col_of) {
      if (tab.basis[i] == static_cast<int>(c)) res.model[v] = tab.rows[i][total];
    }
  }
  return res;
}

LpResult lp_feasible(const std::vector<LinConstraint> &cons) {
  return lp_minimize(cons, {});
}

}  // namespace rhobound
