#include "bound.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace rhobound {

namespace {

BoundPtr make(BoundNode n) { return std::make_shared<const BoundNode>(std::move(n)); }

void check_nat_poly(const Polynomial &p) {
  for (const auto &[m, c] : p.terms())
    if (c < 0) throw std::invalid_argument("Pow base must have nonnegative coefficients");
}

}  // namespace

BoundPtr b_const(BigInt n) { return b_const(NatOmega(std::move(n))); }
BoundPtr b_const(const NatOmega &n) {
  BoundNode b;
  b.kind = BKind::Const;
  b.cval = n;
  return make(std::move(b));
}
BoundPtr b_omega() { return b_const(NatOmega::omega()); }
BoundPtr b_var(int v) {
  BoundNode b;
  b.kind = BKind::Var;
  b.var = v;
  return make(std::move(b));
}
BoundPtr b_sum(std::vector<BoundPtr> kids) {
  if (kids.empty()) return b_const(BigInt(0));
  if (kids.size() == 1) return kids[0];
  BoundNode b;
  b.kind = BKind::Sum;
  b.kids = std::move(kids);
  return make(std::move(b));
}
BoundPtr b_sum(BoundPtr a, BoundPtr b) { return b_sum(std::vector<BoundPtr>{a, b}); }
BoundPtr b_max(std::vector<BoundPtr> kids) {
  if (kids.empty()) return b_const(BigInt(0));
  if (kids.size() == 1) return kids[0];
  BoundNode b;
  b.kind = BKind::Max;
  b.kids = std::move(kids);
  return make(std::move(b));
}
BoundPtr b_max(BoundPtr a, BoundPtr b) { return b_max(std::vector<BoundPtr>{a, b}); }
BoundPtr b_prod(std::vector<BoundPtr> kids) {
  if (kids.empty()) return b_const(BigInt(1));
  if (kids.size() == 1) return kids[0];
  BoundNode b;
  b.kind = BKind::Prod;
  b.kids = std::move(kids);
  return make(std::move(b));
}
BoundPtr b_prod(BoundPtr a, BoundPtr b) { return b_prod(std::vector<BoundPtr>{a, b}); }
BoundPtr b_pow(Polynomial base, BoundPtr exp) {
  check_nat_poly(base);
  BoundNode b;
  b.kind = BKind::Pow;
  b.base = std::move(base);
  b.sub = std::move(exp);
  return make(std::move(b));
}
BoundPtr b_log(Rational k, BoundPtr arg) {
  if (!(k > 1)) throw std::invalid_argument("Log base must be > 1");
  BoundNode b;
  b.kind = BKind::Log;
  b.logbase = std::move(k);
  b.sub = std::move(arg);
  return make(std::move(b));
}

BoundPtr b_from_poly(const Polynomial &p) {
  check_nat_poly(p);
  std::vector<BoundPtr> terms;
  for (const auto &[m, c] : p.terms()) {
    std::vector<BoundPtr> factors;
    if (c != 1 || m.empty()) factors.push_back(b_const(c));
    for (const auto &[ind, e] : m)
      for (int i = 0; i < e; ++i) factors.push_back(b_var(ind));
    terms.push_back(b_prod(std::move(factors)));
  }
  return b_sum(std::move(terms));
}

NatOmega eval_bound(const BoundPtr &b, const std::function<BigInt(int)> &value_of) {
  switch (b->kind) {
    case BKind::Const:
      return b->cval;
    case BKind::Var: {
      BigInt v = value_of(b->var);
      if (v < 0) throw std::invalid_argument("eval_bound: negative variable value");
      return NatOmega(v);
    }
    case BKind::Sum: {
      NatOmega acc{BigInt(0)};
      for (const auto &k : b->kids) acc = acc + eval_bound(k, value_of);
      return acc;
    }
    case BKind::Max: {
      NatOmega acc{BigInt(0)};
      for (const auto &k : b->kids) {
        NatOmega v = eval_bound(k, value_of);
        if (acc < v) acc = v;
      }
      return acc;
    }
    case BKind::Prod: {
      NatOmega acc{BigInt(1)};
      for (const auto &k : b->kids) acc = acc * eval_bound(k, value_of);
      return acc;
    }
    case BKind::Pow: {
      BigInt base = b->base.eval([&](int ind) {
        BigInt v = value_of(ind);
        if (v < 0) throw std::invalid_argument("eval_bound: negative variable value");
        return v;
      });
      return NatOmega::pow(NatOmega(base), eval_bound(b->sub, value_of));
    }
    case BKind::Log:
      return NatOmega::ceil_log(b->logbase, eval_bound(b->sub, value_of));
  }
  throw std::logic_error("eval_bound: bad kind");
}

NatOmega eval_bound(const BoundPtr &b, const std::vector<BigInt> &values) {
  return eval_bound(b, [&](int v) -> BigInt {
    if (v < 0 || v >= static_cast<int>(values.size()))
      throw std::invalid_argument("eval_bound: unbound variable");
    return values[v];
  });
}

std::optional<Polynomial> bound_to_poly(const BoundPtr &b) {
  switch (b->kind) {
    case BKind::Const:
      if (!b->cval.is_finite()) return std::nullopt;
      return Polynomial::constant(b->cval.value());
    case BKind::Var:
      return Polynomial::variable(b->var);
    case BKind::Sum: {
      Polynomial acc;
      for (const auto &k : b->kids) {
        auto p = bound_to_poly(k);
        if (!p) return std::nullopt;
        acc = acc + *p;
      }
      return acc;
    }
    case BKind::Prod: {
      Polynomial acc = Polynomial::constant(BigInt(1));
      for (const auto &k : b->kids) {
        auto p = bound_to_poly(k);
        if (!p) return std::nullopt;
        acc = acc * *p;
      }
      return acc;
    }
    case BKind::Pow: {
      if (b->sub->kind != BKind::Const || !b->sub->cval.is_finite()) return std::nullopt;
      const BigInt &e = b->sub->cval.value();
      if (e > 16) return std::nullopt;
      return b->base.pow(static_cast<unsigned>(e));
    }
    default:
      return std::nullopt;
  }
}

bool is_omega_bound(const BoundPtr &b) { return b->kind == BKind::Const && b->cval.is_omega(); }
bool is_const_bound(const BoundPtr &b) { return b->kind == BKind::Const; }

int bound_cmp(const BoundPtr &a, const BoundPtr &b) {
  if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
  auto cmp_big = [](const BigInt &x, const BigInt &y) { return x < y ? -1 : (x == y ? 0 : 1); };
  switch (a->kind) {
    case BKind::Const: {
      auto rank = [](const NatOmega &n) { return n.is_omega() ? 2 : (n.is_huge() ? 1 : 0); };
      if (rank(a->cval) != rank(b->cval)) return rank(a->cval) < rank(b->cval) ? -1 : 1;
      if (!a->cval.is_finite()) return 0;
      return cmp_big(a->cval.value(), b->cval.value());
    }
    case BKind::Var:
      return a->var < b->var ? -1 : (a->var == b->var ? 0 : 1);
    case BKind::Sum:
    case BKind::Max:
    case BKind::Prod: {
      if (a->kids.size() != b->kids.size()) return a->kids.size() < b->kids.size() ? -1 : 1;
      for (size_t i = 0; i < a->kids.size(); ++i) {
        int c = bound_cmp(a->kids[i], b->kids[i]);
        if (c != 0) return c;
      }
      return 0;
    }
    case BKind::Pow: {
      if (a->base != b->base) return a->base < b->base ? -1 : 1;
      return bound_cmp(a->sub, b->sub);
    }
    case BKind::Log: {
      if (a->logbase != b->logbase) return a->logbase < b->logbase ? -1 : 1;
      return bound_cmp(a->sub, b->sub);
    }
  }
  return 0;
}

bool bound_equal(const BoundPtr &a, const BoundPtr &b) { return bound_cmp(a, b) == 0; }

namespace {

// Evaluation at the all-zero state gives the pointwise minimum of a bound
// (weak monotonicity), used for cheap dominance checks.
NatOmega min_value(const BoundPtr &b) {
  return eval_bound(b, [](int) { return BigInt(0); });
}

BoundPtr simplify_node(const BoundPtr &b);

std::vector<BoundPtr> flatten(BKind kind, const std::vector<BoundPtr> &kids) {
  std::vector<BoundPtr> out;
  for (const auto &k : kids) {
    if (k->kind == kind) {
      for (const auto &kk : k->kids) out.push_back(kk);
    } else {
      out.push_back(k);
    }
  }
  return out;
}

BoundPtr simplify_sum(std::vector<BoundPtr> kids) {
  kids = flatten(BKind::Sum, kids);
  NatOmega cacc{BigInt(0)};
  std::vector<BoundPtr> rest;
  for (auto &k : kids) {
    if (k->kind == BKind::Const) {
      cacc = cacc + k->cval;
    } else {
      rest.push_back(k);
    }
  }
  if (cacc.is_omega()) return b_omega();
  if (!cacc.is_zero() || rest.empty()) rest.push_back(b_const(cacc));
  std::sort(rest.begin(), rest.end(),
            [](const BoundPtr &x, const BoundPtr &y) { return bound_cmp(x, y) < 0; });
  return b_sum(std::move(rest));
}

BoundPtr simplify_prod(std::vector<BoundPtr> kids) {
  kids = flatten(BKind::Prod, kids);
  NatOmega cacc{BigInt(1)};
  bool saw_omega = false;
  std::vector<BoundPtr> rest;
  for (auto &k : kids) {
    if (k->kind == BKind::Const) {
      if (k->cval.is_omega()) {
        saw_omega = true;
        continue;
      }
      cacc = cacc * k->cval;
    } else {
      rest.push_back(k);
    }
  }
  if (cacc.is_zero()) return b_const(BigInt(0));
  if (saw_omega) {
    // ω · rest collapses to ω only when the rest is bounded away from 0.
    bool all_pos = true;
    for (const auto &k : rest)
      if (min_value(k).is_zero()) all_pos = false;
    if (all_pos) return b_omega();
    rest.push_back(b_omega());
  }
  if (!(cacc == NatOmega(BigInt(1))) || rest.empty()) rest.push_back(b_const(cacc));
  std::sort(rest.begin(), rest.end(),
            [](const BoundPtr &x, const BoundPtr &y) { return bound_cmp(x, y) < 0; });
  return b_prod(std::move(rest));
}

BoundPtr simplify_max(std::vector<BoundPtr> kids) {
  kids = flatten(BKind::Max, kids);
  for (const auto &k : kids)
    if (is_omega_bound(k)) return b_omega();
  // Dedupe structurally.
  std::sort(kids.begin(), kids.end(),
            [](const BoundPtr &x, const BoundPtr &y) { return bound_cmp(x, y) < 0; });
  kids.erase(std::unique(kids.begin(), kids.end(),
                         [](const BoundPtr &x, const BoundPtr &y) { return bound_equal(x, y); }),
             kids.end());
  // Drop operands dominated pointwise: a constant c <= min(other), or an
  // operand that occurs as a summand of a sibling sum (summands are >= 0).
  std::vector<BoundPtr> out;
  for (size_t i = 0; i < kids.size(); ++i) {
    bool dominated = false;
    for (size_t j = 0; j < kids.size() && !dominated; ++j) {
      if (i == j) continue;
      if (kids[i]->kind == BKind::Const && kids[i]->cval <= min_value(kids[j]) &&
          (kids[j]->kind != BKind::Const || j < i))
        dominated = true;
      if (kids[j]->kind == BKind::Sum) {
        for (const auto &s : kids[j]->kids)
          if (bound_equal(s, kids[i])) dominated = true;
      }
    }
    if (!dominated) out.push_back(kids[i]);
  }
  if (out.empty()) out.push_back(b_const(BigInt(0)));
  return b_max(std::move(out));
}

BoundPtr simplify_node(const BoundPtr &b) {
  switch (b->kind) {
    case BKind::Const:
    case BKind::Var:
      return b;
    case BKind::Sum:
    case BKind::Max:
    case BKind::Prod: {
      std::vector<BoundPtr> kids;
      kids.reserve(b->kids.size());
      for (const auto &k : b->kids) kids.push_back(simplify_node(k));
      if (b->kind == BKind::Sum) return simplify_sum(std::move(kids));
      if (b->kind == BKind::Prod) return simplify_prod(std::move(kids));
      return simplify_max(std::move(kids));
    }
    case BKind::Pow: {
      BoundPtr e = simplify_node(b->sub);
      if (b->base.is_constant()) {
        BigInt c = b->base.constant_term();
        if (c == 1) return b_const(BigInt(1));
        if (e->kind == BKind::Const)
          return b_const(NatOmega::pow(NatOmega(c), e->cval));
        if (c == 0) return b_pow(b->base, e);  // 0^e is 1 at e=0, else 0
      }
      if (e->kind == BKind::Const && e->cval.is_finite()) {
        if (e->cval.value() == 0) return b_const(BigInt(1));
        if (e->cval.value() == 1) return simplify_node(b_from_poly(b->base));
      }
      return b_pow(b->base, e);
    }
    case BKind::Log: {
      BoundPtr a = simplify_node(b->sub);
      if (a->kind == BKind::Const) return b_const(NatOmega::ceil_log(b->logbase, a->cval));
      return b_log(b->logbase, a);
    }
  }
  throw std::logic_error("simplify: bad kind");
}

}  // namespace

BoundPtr simplify(const BoundPtr &b) {
  BoundPtr cur = b;
  for (int i = 0; i < 4; ++i) {
    BoundPtr next = simplify_node(cur);
    if (bound_equal(next, cur)) return next;
    cur = next;
  }
  return cur;
}

BoundPtr subst(const BoundPtr &b, const std::map<int, BoundPtr> &m) {
  switch (b->kind) {
    case BKind::Const:
      return b;
    case BKind::Var: {
      auto it = m.find(b->var);
      return it == m.end() ? b : it->second;
    }
    case BKind::Sum:
    case BKind::Max:
    case BKind::Prod: {
      std::vector<BoundPtr> kids;
      kids.reserve(b->kids.size());
      for (const auto &k : b->kids) kids.push_back(subst(k, m));
      BoundNode n;
      n.kind = b->kind;
      n.kids = std::move(kids);
      return std::make_shared<const BoundNode>(std::move(n));
    }
    case BKind::Pow: {
      BoundPtr e = subst(b->sub, m);
      bool base_touched = false;
      for (int ind : b->base.indeterminates())
        if (m.count(ind)) base_touched = true;
      if (!base_touched) return b_pow(b->base, e);
      bool ok = true;
      Polynomial composed = b->base.compose([&](int ind) -> std::optional<Polynomial> {
        auto it = m.find(ind);
        if (it == m.end()) return std::nullopt;
        auto p = bound_to_poly(it->second);
        if (!p) {
          ok = false;
          return Polynomial();
        }
        return *p;
      });
      // A non-polynomial replacement inside a Pow base cannot be represented
      // in the bound grammar; over-approximate by ω.
      if (!ok) return b_omega();
      return b_pow(std::move(composed), e);
    }
    case BKind::Log:
      return b_log(b->logbase, subst(b->sub, m));
  }
  throw std::logic_error("subst: bad kind");
}

namespace {

struct Growth {
  bool omg = false;
  bool exp = false;
  long poly = 0;
  long log = 0;
};

bool growth_less(const Growth &a, const Growth &b) {
  auto key = [](const Growth &g) {
    return std::tuple<int, int, long, long>(g.omg ? 1 : 0, g.exp ? 1 : 0, g.poly, g.log);
  };
  return key(a) < key(b);
}

Growth growth_of(const BoundPtr &b);

Growth log_growth_of(const BoundPtr &b) {
  switch (b->kind) {
    case BKind::Const:
      if (b->cval.is_omega()) return {true, false, 0, 0};
      return {};
    case BKind::Var:
      return {false, false, 0, 1};
    case BKind::Sum:
    case BKind::Max: {
      Growth g;
      for (const auto &k : b->kids) {
        Growth kg = log_growth_of(k);
        if (growth_less(g, kg)) g = kg;
      }
      return g;
    }
    case BKind::Prod: {
      Growth g;
      for (const auto &k : b->kids) {
        Growth kg = log_growth_of(k);
        g.omg |= kg.omg;
        g.exp |= kg.exp;
        g.poly += kg.poly;
        g.log += kg.log;
      }
      return g;
    }
    case BKind::Pow: {
      // log(p^e) = e · log(p)
      Growth ge = growth_of(b->sub);
      Growth gb = b->base.is_constant() ? Growth{} : Growth{false, false, 0, 1};
      if (ge.omg || gb.omg) return {true, false, 0, 0};
      if (ge.exp) return ge;
      return {false, false, ge.poly + gb.poly, ge.log + gb.log};
    }
    case BKind::Log:
      return {false, false, 0, 1};
  }
  return {};
}

Growth growth_of(const BoundPtr &b) {
  switch (b->kind) {
    case BKind::Const:
      if (b->cval.is_omega()) return {true, false, 0, 0};
      return {};
    case BKind::Var:
      return {false, false, 1, 0};
    case BKind::Sum:
    case BKind::Max: {
      Growth g;
      for (const auto &k : b->kids) {
        Growth kg = growth_of(k);
        if (growth_less(g, kg)) g = kg;
      }
      return g;
    }
    case BKind::Prod: {
      Growth g;
      for (const auto &k : b->kids) {
        Growth kg = growth_of(k);
        g.omg |= kg.omg;
        g.exp |= kg.exp;
        g.poly += kg.poly;
        g.log += kg.log;
      }
      return g;
    }
    case BKind::Pow: {
      int deg = b->base.degree();
      if (b->sub->kind == BKind::Const) {
        if (b->sub->cval.is_omega()) {
          BigInt c = b->base.is_constant() ? b->base.constant_term() : BigInt(2);
          if (b->base.is_constant() && c <= 1) return {};
          return {true, false, 0, 0};
        }
        if (b->sub->cval.is_huge()) return {false, true, 0, 0};
        long e = b->sub->cval.value() > 1000 ? 1000 : static_cast<long>(b->sub->cval.value());
        if (deg == 0) return {};  // constant^constant
        return {false, false, deg * e, 0};
      }
      Growth ge = growth_of(b->sub);
      if (ge.omg) return {true, false, 0, 0};
      if (b->base.is_constant() && b->base.constant_term() <= 1) return {};
      // Non-constant exponent: exponential (the exponent growth class is not
      // constant here since Const exponents were handled above).
      return {false, true, 0, 0};
    }
    case BKind::Log: {
      Growth g = log_growth_of(b->sub);
      return g;
    }
  }
  return {};
}

}  // namespace

std::string AsymResult::str() const {
  switch (cls) {
    case AsymClass::Const: return "Const";
    case AsymClass::Log: return "Log";
    case AsymClass::Poly: return "Poly(" + std::to_string(poly_degree) + ")";
    case AsymClass::PolyLog:
      return "PolyLog(" + std::to_string(poly_degree) + "," + std::to_string(log_degree) + ")";
    case AsymClass::Exp: return "Exp";
    case AsymClass::Omega: return "Omega";
  }
  return "?";
}

std::string AsymResult::worst_case_token() const {
  switch (cls) {
    case AsymClass::Const: return "1";
    case AsymClass::Log: return "log(n)";
    case AsymClass::Poly:
      return poly_degree == 1 ? "n" : "n^" + std::to_string(poly_degree);
    case AsymClass::PolyLog: {
      unsigned d = poly_degree + 1;  // n^k·log^m(n) ∈ O(n^{k+1}), never under-reported
      return d == 1 ? "n" : "n^" + std::to_string(d);
    }
    case AsymClass::Exp: return "EXP";
    case AsymClass::Omega: return "?";
  }
  return "?";
}

AsymResult asymptotic_class(const BoundPtr &b) {
  Growth g = growth_of(simplify(b));
  AsymResult r;
  if (g.omg) {
    r.cls = AsymClass::Omega;
  } else if (g.exp) {
    r.cls = AsymClass::Exp;
  } else if (g.poly == 0 && g.log == 0) {
    r.cls = AsymClass::Const;
  } else if (g.poly == 0) {
    r.cls = AsymClass::Log;
    r.log_degree = static_cast<unsigned>(g.log);
  } else if (g.log == 0) {
    r.cls = AsymClass::Poly;
    r.poly_degree = static_cast<unsigned>(g.poly);
  } else {
    r.cls = AsymClass::PolyLog;
    r.poly_degree = static_cast<unsigned>(g.poly);
    r.log_degree = static_cast<unsigned>(g.log);
  }
  return r;
}

namespace {

std::string bstr(const BoundPtr &b, const std::function<std::string(int)> &namer, int prec) {
  // prec: 0 sum-level, 1 prod-level, 2 atom-level
  auto paren = [&](const std::string &s, bool need) { return need ? "(" + s + ")" : s; };
  switch (b->kind) {
    case BKind::Const:
      return b->cval.str();
    case BKind::Var:
      return namer(b->var);
    case BKind::Sum: {
      std::string s;
      for (size_t i = 0; i < b->kids.size(); ++i)
        s += (i ? " + " : "") + bstr(b->kids[i], namer, 0);
      return paren(s, prec > 0);
    }
    case BKind::Prod: {
      std::string s;
      for (size_t i = 0; i < b->kids.size(); ++i)
        s += (i ? "*" : "") + bstr(b->kids[i], namer, 1);
      return paren(s, prec > 1);
    }
    case BKind::Max: {
      std::string s = "max(";
      for (size_t i = 0; i < b->kids.size(); ++i) s += (i ? ", " : "") + bstr(b->kids[i], namer, 0);
      return s + ")";
    }
    case BKind::Pow: {
      std::string base = b->base.str(namer);
      bool simple = b->base.terms().size() == 1;
      std::string e = bstr(b->sub, namer, 2);
      bool esimple = b->sub->kind == BKind::Const || b->sub->kind == BKind::Var;
      return paren(base, !simple) + "^" + paren(e, !esimple);
    }
    case BKind::Log: {
      std::string base;
      if (b->logbase == 2) {
        base = "log2";
      } else if (den(b->logbase) == 1) {
        base = "log" + num(b->logbase).str();
      } else {
        base = "log[" + num(b->logbase).str() + "/" + den(b->logbase).str() + "]";
      }
      return base + "(" + bstr(b->sub, namer, 0) + ")";
    }
  }
  return "?";
}

}  // namespace

std::string bound_str(const BoundPtr &b, const std::function<std::string(int)> &namer) {
  return bstr(b, namer, 0);
}

}  // namespace rhobound
