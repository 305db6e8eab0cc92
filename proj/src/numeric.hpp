#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rhobound {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt num(const Rational &r) { return boost::multiprecision::numerator(r); }
inline BigInt den(const Rational &r) { return boost::multiprecision::denominator(r); }

// Ceiling of a rational, exact.
inline BigInt ceil_rat(const Rational &r) {
  BigInt n = num(r), d = den(r);
  BigInt q = n / d;
  if (n % d != 0 && n > 0) q += 1;
  return q;
}

inline BigInt floor_rat(const Rational &r) {
  BigInt n = num(r), d = den(r);
  BigInt q = n / d;
  if (n % d != 0 && n < 0) q -= 1;
  return q;
}

inline unsigned bit_length(const BigInt &v) {
  if (v == 0) return 0;
  return static_cast<unsigned>(msb(boost::multiprecision::abs(v))) + 1;
}

// Values of the bound domain N ∪ {ω}. Arithmetic saturates once a value
// exceeds 2^kHugeBits; `Huge` stands for an unknown finite value at least
// that large, which keeps evaluation of towers like 2^(n·2^n) cheap while
// comparisons against realistically reachable program values stay exact.
class NatOmega {
 public:
  static constexpr unsigned kHugeBits = 1u << 20;  // values < 2^(2^20) stay exact

  NatOmega() : kind_(Kind::Finite), value_(0) {}
  explicit NatOmega(BigInt v) : kind_(Kind::Finite), value_(std::move(v)) {
    if (value_ < 0) throw std::invalid_argument("NatOmega: negative value");
    saturate();
  }
  static NatOmega finite(BigInt v) { return NatOmega(std::move(v)); }
  static NatOmega omega() {
    NatOmega n;
    n.kind_ = Kind::Omega;
    return n;
  }
  static NatOmega huge() {
    NatOmega n;
    n.kind_ = Kind::Huge;
    return n;
  }

  bool is_omega() const { return kind_ == Kind::Omega; }
  bool is_huge() const { return kind_ == Kind::Huge; }
  bool is_finite() const { return kind_ == Kind::Finite; }
  bool is_zero() const { return kind_ == Kind::Finite && value_ == 0; }
  const BigInt &value() const {
    if (!is_finite()) throw std::logic_error("NatOmega: not finite");
    return value_;
  }

  friend NatOmega operator+(const NatOmega &a, const NatOmega &b) {
    if (a.is_omega() || b.is_omega()) return omega();
    if (a.is_huge() || b.is_huge()) return huge();
    return NatOmega(a.value_ + b.value_);
  }

  // 0·ω = 0 so that unreachable parts multiplied by ω collapse.
  friend NatOmega operator*(const NatOmega &a, const NatOmega &b) {
    if (a.is_zero() || b.is_zero()) return NatOmega(BigInt(0));
    if (a.is_omega() || b.is_omega()) return omega();
    if (a.is_huge() || b.is_huge()) return huge();
    if (bit_length(a.value_) + bit_length(b.value_) > kHugeBits) return huge();
    return NatOmega(a.value_ * b.value_);
  }

  // base^exp with 0^0 = 1.
  static NatOmega pow(const NatOmega &base, const NatOmega &exp) {
    if (exp.is_zero()) return NatOmega(BigInt(1));
    if (base.is_zero()) return NatOmega(BigInt(0));
    if (base.is_finite() && base.value_ == 1) return NatOmega(BigInt(1));
    if (exp.is_omega() || base.is_omega()) return omega();
    if (exp.is_huge() || base.is_huge()) return huge();
    BigInt e = exp.value_;
    if (BigInt(bit_length(base.value_)) * e > kHugeBits) return huge();
    BigInt acc = 1, b = base.value_;
    while (e > 0) {
      if ((e & 1) != 0) acc *= b;
      e >>= 1;
      if (e > 0) b *= b;
      if (bit_length(acc) > kHugeBits || bit_length(b) > kHugeBits) return huge();
    }
    return NatOmega(acc);
  }

  // ⌈log_k(max{1, x})⌉ for rational k > 1; Log(k, ω) = ω.
  static NatOmega ceil_log(const Rational &k, const NatOmega &x) {
    if (!(k > 1)) throw std::invalid_argument("ceil_log: base must be > 1");
    if (x.is_omega()) return omega();
    if (x.is_huge()) return huge();
    if (x.value_ <= 1) return NatOmega(BigInt(0));
    Rational acc = 1;
    BigInt m = 0;
    while (acc < Rational(x.value_)) {
      acc *= k;
      m += 1;
    }
    return NatOmega(m);
  }

  // Total order used by tests and checks; Huge compares between every exact
  // finite and ω, and two Huges compare equal.
  friend bool operator<=(const NatOmega &a, const NatOmega &b) {
    auto rank = [](const NatOmega &n) { return n.is_omega() ? 2 : (n.is_huge() ? 1 : 0); };
    if (rank(a) != rank(b)) return rank(a) < rank(b);
    if (a.is_finite()) return a.value_ <= b.value_;
    return true;
  }
  friend bool operator<(const NatOmega &a, const NatOmega &b) { return a <= b && !(b <= a); }
  friend bool operator==(const NatOmega &a, const NatOmega &b) { return a <= b && b <= a; }
  friend bool operator!=(const NatOmega &a, const NatOmega &b) { return !(a == b); }

  std::string str() const {
    if (is_omega()) return "inf";
    if (is_huge()) return "huge";
    return value_.str();
  }

 private:
  enum class Kind { Finite, Huge, Omega };
  Kind kind_;
  BigInt value_;

  void saturate() {
    if (bit_length(value_) > kHugeBits) kind_ = Kind::Huge;
  }
};

}  // namespace rhobound
