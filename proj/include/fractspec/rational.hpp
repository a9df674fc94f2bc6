#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace fractspec {

/// Raised when an operation is called outside its mathematical domain
/// (zero denominators, empty digit sets, non-integral moduli, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Exact rational number. Always stored reduced with a positive denominator,
/// so equality, ordering and hashing are canonical.
class Rational {
 public:
  Rational() = default;
  Rational(long long value) : value_(static_cast<signed long>(value)) {}  // NOLINT(google-explicit-constructor)
  Rational(const mpz_class& numerator, const mpz_class& denominator);
  explicit Rational(const mpz_class& integer) : value_(integer) {}

  /// Accepts "a", "a/b" and finite decimals such as "-0.125".
  static Rational parse(std::string_view text);
  /// Exact value of a finite double (a dyadic rational).
  static Rational from_double(double x);

  mpz_class numerator() const { return value_.get_num(); }
  mpz_class denominator() const { return value_.get_den(); }
  const mpq_class& raw() const { return value_; }

  std::string to_string() const;
  double to_double() const { return value_.get_d(); }

  int sign() const { return sgn(value_); }
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const { return value_.get_den() == 1; }
  std::optional<long long> to_int64() const;

  Rational abs() const;
  Rational reciprocal() const;
  /// Largest integer not exceeding the value.
  mpz_class floor() const;
  /// Fractional part in [0, 1).
  Rational frac() const;

  Rational& operator+=(const Rational& rhs);
  Rational& operator-=(const Rational& rhs);
  Rational& operator*=(const Rational& rhs);
  Rational& operator/=(const Rational& rhs);

  friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
  friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
  friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
  friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }
  Rational operator-() const;

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.value_, b.value_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  explicit Rational(mpq_class v) : value_(std::move(v)) {}
  mpq_class value_;
};

/// Exact x^k; k may be negative when x != 0.
Rational pow(const Rational& x, long long k);

std::ostream& operator<<(std::ostream& os, const Rational& x);

struct RationalHash {
  std::size_t operator()(const Rational& x) const;
};

}  // namespace fractspec
