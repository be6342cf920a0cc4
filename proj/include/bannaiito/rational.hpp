#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

#include "bannaiito/errors.hpp"

namespace bi {

/// Arbitrary-precision rational, kept in canonical form (gcd(p,q)=1, q>0).
/// Thin wrapper over GMP's mpq_class; the wrapper pins down the textual
/// format ("p/q", or just "p" when q=1) and turns GMP's division-by-zero
/// traps into exceptions.
class Rational {
public:
  Rational() : v_(0) {}
  Rational(long n) : v_(n) {}  // NOLINT: implicit by design, mirrors integer literals
  Rational(long num, long den) {
    if (den == 0) throw ArgumentError("rational: zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
  }

  /// Parses "p", "-p", "p/q" with optional signs on either part.
  static Rational parse(std::string_view text) {
    const std::string s(text);
    const auto bad = [&] { throw ParseError("not a rational literal: '" + s + "'"); };
    std::size_t i = 0;
    auto scan_int = [&](std::size_t from) -> std::size_t {
      std::size_t j = from;
      if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
      const std::size_t digits = j;
      while (j < s.size() && s[j] >= '0' && s[j] <= '9') ++j;
      if (j == digits) bad();
      return j;
    };
    i = scan_int(0);
    std::string num = s.substr(0, i);
    std::string den = "1";
    if (i < s.size()) {
      if (s[i] != '/') bad();
      const std::size_t j = scan_int(i + 1);
      if (j != s.size()) bad();
      den = s.substr(i + 1);
    }
    // GMP rejects an explicit leading '+'
    if (!num.empty() && num[0] == '+') num.erase(0, 1);
    if (!den.empty() && den[0] == '+') den.erase(0, 1);
    Rational r;
    mpz_class p(num), q(den);
    if (q == 0) throw ParseError("rational: zero denominator in '" + s + "'");
    r.v_ = mpq_class(p, q);
    r.v_.canonicalize();
    return r;
  }

  /// Canonical text: "p/q", or "p" when the denominator is 1.
  std::string str() const {
    std::string out = v_.get_num().get_str();
    if (v_.get_den() != 1) out += "/" + v_.get_den().get_str();
    return out;
  }

  double to_double() const { return v_.get_d(); }
  bool is_zero() const { return v_ == 0; }
  int sign() const { return sgn(v_); }

  Rational operator-() const {
    Rational r;
    r.v_ = -v_;
    return r;
  }
  Rational& operator+=(const Rational& o) {
    v_ += o.v_;
    return *this;
  }
  Rational& operator-=(const Rational& o) {
    v_ -= o.v_;
    return *this;
  }
  Rational& operator*=(const Rational& o) {
    v_ *= o.v_;
    return *this;
  }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw ArgumentError("rational: division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

private:
  mpq_class v_;
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

}  // namespace bi
