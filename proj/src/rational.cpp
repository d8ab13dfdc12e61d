#include "ergomap/rational.hpp"

#include <cmath>

#include "ergomap/errors.hpp"

namespace ergomap {

namespace {

double log_mpz(const mpz_class& z) {
  // z = d * 2^e with d in [0.5, 1)
  long exp = 0;
  const double d = mpz_get_d_2exp(&exp, z.get_mpz_t());
  return std::log(d) + static_cast<double>(exp) * std::log(2.0);
}

bool parse_integer(std::string_view s, mpz_class& out) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (std::size_t k = i; k < s.size(); ++k) {
    if (s[k] < '0' || s[k] > '9') return false;
  }
  std::string digits(s[0] == '+' ? s.substr(1) : s);
  return out.set_str(digits, 10) == 0;
}

}  // namespace

Rational::Rational(long num, long den) : Rational(mpz_class(num), mpz_class(den)) {}

Rational::Rational(const mpz_class& num, const mpz_class& den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
  const auto slash = text.find('/');
  mpz_class num, den(1);
  if (slash == std::string_view::npos) {
    if (!parse_integer(text, num)) throw ParseError("malformed rational '" + std::string(text) + "'");
  } else {
    if (!parse_integer(text.substr(0, slash), num) || !parse_integer(text.substr(slash + 1), den) ||
        den == 0) {
      throw ParseError("malformed rational '" + std::string(text) + "'");
    }
  }
  return Rational(num, den);
}

double Rational::log() const {
  if (sign() <= 0) throw DomainError("log of non-positive rational " + str());
  return log_mpz(q_.get_num()) - log_mpz(q_.get_den());
}

std::size_t Rational::height_bits() const {
  const mpz_class n = ::abs(q_.get_num());
  const std::size_t bn = mpz_sizeinbase(n.get_mpz_t(), 2);
  const std::size_t bd = mpz_sizeinbase(q_.get_den_mpz_t(), 2);
  return bn > bd ? bn : bd;
}

std::string Rational::str() const {
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

Rational Rational::inverse() const {
  if (is_zero()) throw DomainError("inverse of zero");
  return Rational(mpq_class(1) / q_);
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw DomainError("division by zero");
  q_ /= o.q_;
  return *this;
}

Rational dyadic_below(const Rational& bound) {
  if (bound.sign() <= 0) throw DomainError("dyadic_below needs a positive bound");
  Rational d(1);
  while (!(d < bound)) d /= Rational(2);
  return d;
}

namespace {

std::size_t hash_mpz(const mpz_srcptr z) {
  std::size_t h = static_cast<std::size_t>(mpz_sgn(z)) + 0x9e3779b97f4a7c15ULL;
  const std::size_t n = mpz_size(z);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= static_cast<std::size_t>(mpz_getlimbn(z, static_cast<mp_size_t>(i))) + 0x9e3779b97f4a7c15ULL +
         (h << 6) + (h >> 2);
  }
  return h;
}

}  // namespace

std::size_t RationalHash::operator()(const Rational& r) const {
  const std::size_t h1 = hash_mpz(r.raw().get_num_mpz_t());
  const std::size_t h2 = hash_mpz(r.raw().get_den_mpz_t());
  return h1 ^ (h2 + 0x9e3779b97f4a7c15ULL + (h1 << 6) + (h1 >> 2));
}

}  // namespace ergomap
