#include "pcim/rational.hpp"

#include <cctype>

#include "pcim/errors.hpp"

namespace pcim {

Rational::Rational(long num, long den) : v_(num, den) {
  if (den == 0) raise(errc::bad_spec, "rational with zero denominator");
  canonicalize();
}

Rational::Rational(const mpz_class& num, const mpz_class& den) : v_(num, den) {
  if (sgn(den) == 0) raise(errc::bad_spec, "rational with zero denominator");
  canonicalize();
}

void Rational::canonicalize() { v_.canonicalize(); }

std::optional<Rational> Rational::parse(std::string_view s) {
  if (s.empty()) return std::nullopt;
  std::size_t i = 0;
  if (s[0] == '-') i = 1;
  std::size_t digits = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) { ++i; ++digits; }
  if (digits == 0) return std::nullopt;
  if (i < s.size()) {
    if (s[i] != '/') return std::nullopt;  // rejects "0.5", "1e-3", whitespace
    ++i;
    std::size_t den_digits = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) { ++i; ++den_digits; }
    if (den_digits == 0 || i != s.size()) return std::nullopt;
  }
  mpq_class q;
  if (mpq_set_str(q.get_mpq_t(), std::string(s).c_str(), 10) != 0) return std::nullopt;
  if (sgn(q.get_den()) == 0) return std::nullopt;
  q.canonicalize();
  return Rational(q);
}

Rational Rational::abs() const {
  Rational r = *this;
  mpq_abs(r.v_.get_mpq_t(), v_.get_mpq_t());
  return r;
}

std::size_t Rational::limbs() const {
  return mpz_size(v_.get_num().get_mpz_t()) + mpz_size(v_.get_den().get_mpz_t());
}

Rational Rational::round_up_magnitude(unsigned bits) const {
  if (is_zero()) return Rational();
  mpz_class num = v_.get_num();
  mpz_abs(num.get_mpz_t(), num.get_mpz_t());
  mpz_class scaled;
  mpz_mul_2exp(scaled.get_mpz_t(), num.get_mpz_t(), bits);
  mpz_class k;
  mpz_cdiv_q(k.get_mpz_t(), scaled.get_mpz_t(), v_.get_den().get_mpz_t());
  mpz_class one = 1;
  mpz_class denom;
  mpz_mul_2exp(denom.get_mpz_t(), one.get_mpz_t(), bits);
  Rational r(k, denom);
  return sign() < 0 ? -r : r;
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.is_zero()) raise(errc::bad_spec, "division by zero");
  return Rational(mpq_class(a.v_ / b.v_), Rational::raw_tag{});
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) raise(errc::bad_spec, "division by zero");
  v_ /= o.v_;
  return *this;
}

std::size_t Rational::hash() const {
  // Cheap O(size) hash: residues mod two word-size primes plus the sign.
  const mpz_srcptr n = v_.get_num().get_mpz_t();
  const mpz_srcptr d = v_.get_den().get_mpz_t();
  unsigned long hn = mpz_fdiv_ui(n, 0xFFFFFFFBUL);
  unsigned long hd = mpz_fdiv_ui(d, 0xFFFFFFEFUL);
  std::size_t h = hn * 1000003u + hd;
  h ^= static_cast<std::size_t>(sgn(v_) + 1) << 17;
  return h;
}

Rational min(const Rational& a, const Rational& b) { return a <= b ? a : b; }
Rational max(const Rational& a, const Rational& b) { return a >= b ? a : b; }

Rational pow(const Rational& base, unsigned long exp) {
  Rational result(1);
  Rational b = base;
  while (exp > 0) {
    if (exp & 1UL) result *= b;
    b *= b;
    exp >>= 1UL;
  }
  return result;
}

const char* to_string(errc c) {
  switch (c) {
    case errc::bad_spec: return "BadSpec";
    case errc::bad_partition: return "BadPartition";
    case errc::non_contracting: return "NonContracting";
    case errc::escapes_domain: return "EscapesDomain";
    case errc::start_on_delta: return "StartOnDelta";
    case errc::word_too_short: return "WordTooShort";
    case errc::depth_budget_exceeded: return "DepthBudgetExceeded";
    case errc::order_violation: return "OrderViolation";
    case errc::bound_violation: return "BoundViolation";
  }
  return "UnknownError";
}

}  // namespace pcim
