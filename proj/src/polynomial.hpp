#pragma once

#include "numeric.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace rhobound {

// A monomial maps indeterminate id -> exponent >= 1, kept sorted by id.
using Monomial = std::vector<std::pair<int, int>>;

// Multivariate polynomial with coefficients C over integer-identified
// indeterminates. Canonical: no zero coefficients, monomials sorted, so
// structural equality coincides with semantic equality.
template <class C>
class PolyT {
 public:
  PolyT() = default;
  static PolyT constant(C c) {
    PolyT p;
    if (c != 0) p.terms_[Monomial{}] = std::move(c);
    return p;
  }
  static PolyT variable(int ind, C coeff = C(1)) {
    PolyT p;
    if (coeff != 0) p.terms_[Monomial{{ind, 1}}] = std::move(coeff);
    return p;
  }
  static PolyT monomial(Monomial m, C coeff) {
    PolyT p;
    if (coeff != 0) p.terms_[std::move(m)] = std::move(coeff);
    return p;
  }

  const std::map<Monomial, C> &terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
  }
  C constant_term() const {
    auto it = terms_.find(Monomial{});
    return it == terms_.end() ? C(0) : it->second;
  }
  C coeff(const Monomial &m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? C(0) : it->second;
  }

  void add_term(const Monomial &m, const C &c) {
    if (c == 0) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      terms_.emplace(m, c);
    } else {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  friend PolyT operator+(const PolyT &a, const PolyT &b) {
    PolyT r = a;
    for (const auto &[m, c] : b.terms_) r.add_term(m, c);
    return r;
  }
  friend PolyT operator-(const PolyT &a, const PolyT &b) {
    PolyT r = a;
    for (const auto &[m, c] : b.terms_) r.add_term(m, -c);
    return r;
  }
  PolyT operator-() const {
    PolyT r;
    for (const auto &[m, c] : terms_) r.terms_[m] = -c;
    return r;
  }
  friend PolyT operator*(const PolyT &a, const PolyT &b) {
    PolyT r;
    for (const auto &[ma, ca] : a.terms_)
      for (const auto &[mb, cb] : b.terms_) r.add_term(mul_monomials(ma, mb), ca * cb);
    return r;
  }
  PolyT scaled(const C &k) const {
    PolyT r;
    if (k == 0) return r;
    for (const auto &[m, c] : terms_) r.terms_[m] = c * k;
    return r;
  }
  PolyT pow(unsigned e) const {
    PolyT r = constant(C(1));
    for (unsigned i = 0; i < e; ++i) r = r * *this;
    return r;
  }

  bool operator==(const PolyT &o) const { return terms_ == o.terms_; }
  bool operator!=(const PolyT &o) const { return !(*this == o); }
  bool operator<(const PolyT &o) const { return terms_ < o.terms_; }

  static Monomial mul_monomials(const Monomial &a, const Monomial &b) {
    Monomial r;
    size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
      if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
        r.push_back(a[i++]);
      } else if (i == a.size() || b[j].first < a[i].first) {
        r.push_back(b[j++]);
      } else {
        r.emplace_back(a[i].first, a[i].second + b[j].second);
        ++i, ++j;
      }
    }
    return r;
  }

  std::set<int> indeterminates() const {
    std::set<int> s;
    for (const auto &[m, c] : terms_)
      for (const auto &[ind, e] : m) s.insert(ind);
    return s;
  }
  bool mentions(int ind) const {
    for (const auto &[m, c] : terms_)
      for (const auto &[i, e] : m)
        if (i == ind) return true;
    return false;
  }

  int degree() const {
    int d = 0;
    for (const auto &[m, c] : terms_) {
      int t = 0;
      for (const auto &[i, e] : m) t += e;
      d = std::max(d, t);
    }
    return d;
  }
  bool is_linear() const { return degree() <= 1; }

  // For a linear polynomial: constant part plus coefficient per indeterminate.
  std::optional<std::pair<C, std::map<int, C>>> linear_decomp() const {
    std::pair<C, std::map<int, C>> r{C(0), {}};
    for (const auto &[m, c] : terms_) {
      if (m.empty()) {
        r.first = c;
      } else if (m.size() == 1 && m[0].second == 1) {
        r.second[m[0].first] = c;
      } else {
        return std::nullopt;
      }
    }
    return r;
  }

  template <class F>
  auto eval(F value_of) const -> decltype(value_of(0)) {
    using V = decltype(value_of(0));
    V total = V(0);
    for (const auto &[m, c] : terms_) {
      V t = V(c);
      for (const auto &[ind, e] : m) {
        V v = value_of(ind);
        for (int k = 0; k < e; ++k) t = t * v;
      }
      total = total + t;
    }
    return total;
  }

  // Simultaneous substitution of indeterminates by polynomials; ids not in
  // the map stay themselves.
  PolyT compose(const std::function<std::optional<PolyT>(int)> &repl) const {
    PolyT total;
    for (const auto &[m, c] : terms_) {
      PolyT t = constant(c);
      for (const auto &[ind, e] : m) {
        std::optional<PolyT> r = repl(ind);
        PolyT factor = r ? *r : variable(ind);
        t = t * factor.pow(static_cast<unsigned>(e));
      }
      total = total + t;
    }
    return total;
  }

  template <class D>
  PolyT<D> map_coeffs(const std::function<D(const C &)> &f) const {
    PolyT<D> r;
    for (const auto &[m, c] : terms_) r.add_term(m, f(c));
    return r;
  }

  std::string str(const std::function<std::string(int)> &namer) const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto &[m, c] : terms_) {
      if (!first) out += " + ";
      first = false;
      std::string mono;
      for (const auto &[ind, e] : m) {
        if (!mono.empty()) mono += "*";
        mono += namer(ind);
        if (e > 1) mono += "^" + std::to_string(e);
      }
      if (mono.empty()) {
        out += coeff_str(c);
      } else if (c == 1) {
        out += mono;
      } else if (c == -1) {
        out += "-" + mono;
      } else {
        out += coeff_str(c) + "*" + mono;
      }
    }
    return out;
  }

 private:
  static std::string coeff_str(const BigInt &c) { return c.str(); }
  static std::string coeff_str(const Rational &c) {
    if (den(c) == 1) return num(c).str();
    return num(c).str() + "/" + den(c).str();
  }
  std::map<Monomial, C> terms_;
};

using Polynomial = PolyT<BigInt>;
using RatPoly = PolyT<Rational>;

inline RatPoly to_rat_poly(const Polynomial &p) {
  return p.map_coeffs<Rational>([](const BigInt &c) { return Rational(c); });
}

// ⌈p⌉: absolute values of all coefficients; pointwise |p(σ)| <= ⌈p⌉(|σ|).
inline Polynomial ceil_poly(const Polynomial &p) {
  return p.map_coeffs<BigInt>([](const BigInt &c) { return boost::multiprecision::abs(c); });
}

}  // namespace rhobound
