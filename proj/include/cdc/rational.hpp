#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>

namespace cdc {

using Integer = boost::multiprecision::cpp_int;

/// Exact rational number, always in lowest terms with a positive denominator.
///
/// Every load and every LP value in this project is an exact fraction, so all
/// comparisons are exact; floating point appears only when rendering output.
class Rational {
 public:
  Rational() : value_(0) {}
  Rational(long long v) : value_(v) {}  // implicit: counts promote to loads
  Rational(const Integer& v) : value_(v) {}
  Rational(const Integer& num, const Integer& den);

  Integer numerator() const { return boost::multiprecision::numerator(value_); }
  Integer denominator() const { return boost::multiprecision::denominator(value_); }

  bool is_zero() const { return value_.is_zero(); }
  bool is_integer() const { return denominator() == 1; }
  /// Largest integer <= *this.
  Integer floor() const;

  Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
  Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
  Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { Rational r; r.value_ = -a.value_; return r; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.value_ != b.value_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.value_ < b.value_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.value_ <= b.value_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.value_ > b.value_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.value_ >= b.value_; }

  /// "p/q" in lowest terms; just "p" when the value is an integer.
  std::string to_string() const;

  /// Decimal rendering by exact long division, rounded to `significant`
  /// significant digits. Presentation only; never used in comparisons.
  std::string to_decimal(int significant = 15) const;

  double to_double() const;

 private:
  boost::multiprecision::cpp_rational value_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace cdc
