#include "fractspec/rational.hpp"

#include <cctype>
#include <cmath>
#include <ostream>

namespace fractspec {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rational::Rational(const mpz_class& numerator, const mpz_class& denominator) {
  if (denominator == 0) throw DomainError("rational with zero denominator");
  value_ = mpq_class(numerator, denominator);
  value_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  bool negative = false;
  std::string_view body = s;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  auto bad = [&] { return DomainError("malformed rational '" + std::string(text) + "'"); };

  mpz_class num;
  mpz_class den = 1;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto a = body.substr(0, slash);
    auto b = body.substr(slash + 1);
    if (!all_digits(a) || !all_digits(b)) throw bad();
    num.set_str(std::string(a), 10);
    den.set_str(std::string(b), 10);
    if (den == 0) throw DomainError("rational with zero denominator: '" + std::string(text) + "'");
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    auto a = body.substr(0, dot);
    auto b = body.substr(dot + 1);
    if ((a.empty() && b.empty()) || (!a.empty() && !all_digits(a)) || (!b.empty() && !all_digits(b)))
      throw bad();
    std::string digits = std::string(a) + std::string(b);
    num.set_str(digits.empty() ? "0" : digits, 10);
    mpz_ui_pow_ui(den.get_mpz_t(), 10, b.size());
  } else {
    if (!all_digits(body)) throw bad();
    num.set_str(std::string(body), 10);
  }
  if (negative) num = -num;
  return Rational(num, den);
}

Rational Rational::from_double(double x) {
  if (!std::isfinite(x)) throw DomainError("cannot convert a non-finite double to a rational");
  mpq_class q;
  mpq_set_d(q.get_mpq_t(), x);
  q.canonicalize();
  return Rational(std::move(q));
}

std::string Rational::to_string() const {
  if (is_integer()) return value_.get_num().get_str();
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

std::optional<long long> Rational::to_int64() const {
  if (!is_integer()) return std::nullopt;
  const mpz_class& n = value_.get_num();
  if (!n.fits_slong_p()) return std::nullopt;
  return static_cast<long long>(n.get_si());
}

Rational Rational::abs() const { return Rational(mpq_class(::abs(value_))); }

Rational Rational::reciprocal() const {
  if (is_zero()) throw DomainError("reciprocal of zero");
  return Rational(value_.get_den(), value_.get_num());
}

mpz_class Rational::floor() const {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
  return q;
}

Rational Rational::frac() const { return *this - Rational(floor()); }

Rational& Rational::operator+=(const Rational& rhs) {
  value_ += rhs.value_;
  return *this;
}

Rational& Rational::operator-=(const Rational& rhs) {
  value_ -= rhs.value_;
  return *this;
}

Rational& Rational::operator*=(const Rational& rhs) {
  value_ *= rhs.value_;
  return *this;
}

Rational& Rational::operator/=(const Rational& rhs) {
  if (rhs.is_zero()) throw DomainError("division by zero");
  value_ /= rhs.value_;
  return *this;
}

Rational Rational::operator-() const { return Rational(mpq_class(-value_)); }

Rational pow(const Rational& x, long long k) {
  if (k < 0) {
    if (x.is_zero()) throw DomainError("zero raised to a negative power");
    return pow(x.reciprocal(), -k);
  }
  mpz_class n, d;
  mpz_pow_ui(n.get_mpz_t(), x.numerator().get_mpz_t(), static_cast<unsigned long>(k));
  mpz_pow_ui(d.get_mpz_t(), x.denominator().get_mpz_t(), static_cast<unsigned long>(k));
  return Rational(n, d);
}

std::ostream& operator<<(std::ostream& os, const Rational& x) { return os << x.to_string(); }

std::size_t RationalHash::operator()(const Rational& x) const {
  std::size_t h = std::hash<std::string>{}(x.numerator().get_str(16));
  return h ^ (std::hash<std::string>{}(x.denominator().get_str(16)) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

}  // namespace fractspec
