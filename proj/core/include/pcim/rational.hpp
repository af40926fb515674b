#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

namespace pcim {

/// Exact arbitrary-precision rational, always in lowest terms with a positive
/// denominator. The only scalar type used by the analysis core.
class Rational {
public:
  Rational() : v_(0) {}
  Rational(long n) : v_(n) {}                       // NOLINT(google-explicit-constructor)
  Rational(long num, long den);
  explicit Rational(const mpq_class& q) : v_(q) { canonicalize(); }
  explicit Rational(const mpz_class& num, const mpz_class& den);

  /// Accepts "p", "-p", "p/q" (decimal digits only). Anything else — in
  /// particular decimal literals like "0.5" — is rejected.
  static std::optional<Rational> parse(std::string_view s);

  std::string str() const { return v_.get_str(); }  // "p" or "p/q"
  double to_double() const { return v_.get_d(); }

  const mpz_class& num() const { return v_.get_num(); }
  const mpz_class& den() const { return v_.get_den(); }

  bool is_zero() const { return sgn(v_) == 0; }
  int sign() const { return sgn(v_); }
  Rational abs() const;

  /// Combined limb count of numerator and denominator; a cheap size measure.
  std::size_t limbs() const;

  /// Smallest multiple of 2^-bits that is >= |*this|, with the original sign.
  /// Used to log distances with bounded storage without understating them.
  Rational round_up_magnitude(unsigned bits = 48) const;

  friend Rational operator+(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ + b.v_), raw_tag{}); }
  friend Rational operator-(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ - b.v_), raw_tag{}); }
  friend Rational operator*(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ * b.v_), raw_tag{}); }
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational operator-() const { return Rational(mpq_class(-v_), raw_tag{}); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o);

  friend bool operator==(const Rational& a, const Rational& b) { return mpq_equal(a.v_.get_mpq_t(), b.v_.get_mpq_t()) != 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.v_; }

  std::size_t hash() const;

private:
  struct raw_tag {};
  Rational(mpq_class q, raw_tag) : v_(std::move(q)) {}  // gmp ops keep canonical form
  void canonicalize();

  mpq_class v_;
};

inline Rational abs(const Rational& r) { return r.abs(); }
Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);

/// lambda^n by exact squaring.
Rational pow(const Rational& base, unsigned long exp);

struct RationalHash {
  std::size_t operator()(const Rational& r) const { return r.hash(); }
};

}  // namespace pcim
