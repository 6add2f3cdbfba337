#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "projlab/errors.hpp"

namespace projlab {

/// Arbitrary-precision integer.
using Integer = mpz_class;

/// Exact rational number in canonical form: positive denominator,
/// gcd(|num|, den) = 1. All arithmetic is exact; equality is structural.
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(int n) : v_(n) {}                // NOLINT(runtime/explicit)
  Rational(long n) : v_(n) {}               // NOLINT(runtime/explicit)
  Rational(const Integer& n) : v_(n) {}     // NOLINT(runtime/explicit)

  Rational(long num, long den) : Rational(Integer(num), Integer(den)) {}
  Rational(const Integer& num, const Integer& den) {
    if (sgn(den) == 0) throw DomainError("rational with zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
  }

  /// Parses "p/q" or "p" (optional sign, decimal digits). Throws SchemaError.
  static Rational from_string(std::string_view s) {
    const std::string text(s);
    const auto bad = [&] {
      throw SchemaError("invalid rational literal: \"" + text + "\"");
    };
    if (text.empty()) bad();
    const auto slash = text.find('/');
    std::string num = text.substr(0, slash);
    if (!is_integer_literal(num)) bad();
    if (num[0] == '+') num.erase(0, 1);  // mpz_set_str rejects a leading '+'
    if (slash == std::string::npos) {
      Rational r;
      r.v_ = mpq_class(mpz_class(num));
      return r;
    }
    const std::string den = text.substr(slash + 1);
    if (den.empty() || den[0] == '+' || den[0] == '-' || !is_integer_literal(den)) bad();
    const mpz_class d(den);
    if (sgn(d) == 0) throw SchemaError("rational with zero denominator: \"" + text + "\"");
    return Rational(mpz_class(num), d);
  }

  /// Exact dyadic rational equal to the given double. Rejects NaN/inf.
  static Rational from_double(double d) {
    if (!(d == d) || d - d != 0.0) throw DomainError("non-finite double");
    Rational r;
    mpq_set_d(r.v_.get_mpq_t(), d);
    return r;
  }

  /// 2^k for any integer k.
  static Rational pow2(long k) {
    Rational r(1);
    if (k >= 0) {
      mpz_mul_2exp(r.v_.get_num_mpz_t(), r.v_.get_num_mpz_t(), static_cast<mp_bitcnt_t>(k));
    } else {
      mpz_mul_2exp(r.v_.get_den_mpz_t(), r.v_.get_den_mpz_t(), static_cast<mp_bitcnt_t>(-k));
    }
    return r;
  }

  Integer num() const { return v_.get_num(); }
  Integer den() const { return v_.get_den(); }

  int sign() const { return sgn(v_); }
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const { return v_.get_den() == 1; }

  /// 64-bit floating-point shadow. Advisory only; verdicts stay exact.
  double to_double() const { return v_.get_d(); }

  /// "p/q", or "p" when the denominator is 1.
  std::string str() const {
    if (is_integer()) return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
  }

  Rational operator-() const {
    Rational r;
    r.v_ = -v_;
    return r;
  }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw DomainError("rational division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return mpq_equal(a.v_.get_mpq_t(), b.v_.get_mpq_t()) != 0;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = mpq_cmp(a.v_.get_mpq_t(), b.v_.get_mpq_t());
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  /// acc -= f * x without a temporary Rational allocation per call.
  static void submul(Rational& acc, const Rational& f, const Rational& x) {
    static thread_local mpq_class scratch;
    mpq_mul(scratch.get_mpq_t(), f.v_.get_mpq_t(), x.v_.get_mpq_t());
    mpq_sub(acc.v_.get_mpq_t(), acc.v_.get_mpq_t(), scratch.get_mpq_t());
  }

 private:
  static bool is_integer_literal(const std::string& s) {
    std::size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
    if (i >= s.size()) return false;
    for (; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') return false;
    }
    return true;
  }

  mpq_class v_;
};

inline Rational abs(const Rational& x) { return x.sign() < 0 ? -x : x; }

/// Floating-point mirror of an exact value. The mirror is advisory; all
/// verdicts are decided on the exact side.
inline double float_mirror(const Rational& x) { return x.to_double(); }

/// Binomial coefficient C(n, k); 0 when k > n.
inline Integer binom(unsigned long n, unsigned long k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

inline std::string to_string(const Rational& x) { return x.str(); }

}  // namespace projlab
