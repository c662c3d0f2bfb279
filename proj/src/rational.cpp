#include "cdc/rational.hpp"

#include <ostream>
#include <stdexcept>

namespace cdc {

namespace mp = boost::multiprecision;

Rational::Rational(const Integer& num, const Integer& den) {
  if (den.is_zero()) {
    throw std::invalid_argument("Rational: zero denominator");
  }
  // cpp_rational insists on a positive denominator; move the sign up front.
  if (den < 0) {
    value_ = mp::cpp_rational(-num, -den);
  } else {
    value_ = mp::cpp_rational(num, den);
  }
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.value_.is_zero()) {
    throw std::invalid_argument("Rational: division by zero");
  }
  value_ /= o.value_;
  return *this;
}

Integer Rational::floor() const {
  Integer q = numerator() / denominator();
  // cpp_int division truncates toward zero; fix up negatives.
  if (numerator() < 0 && q * denominator() != numerator()) {
    --q;
  }
  return q;
}

std::string Rational::to_string() const {
  if (is_integer()) {
    return numerator().str();
  }
  return numerator().str() + "/" + denominator().str();
}

std::string Rational::to_decimal(int significant) const {
  if (significant < 1) {
    throw std::invalid_argument("to_decimal: need at least one digit");
  }
  if (is_zero()) {
    return "0";
  }
  Integer p = numerator();
  const Integer q = denominator();
  const bool negative = p < 0;
  if (negative) {
    p = -p;
  }

  // Long division. Collect the integer part, then fractional digits until
  // `significant` significant digits (counted from the first nonzero digit)
  // plus one guard digit for rounding.
  std::string int_part = Integer(p / q).str();
  Integer rem = p % q;
  int sig_seen = (int_part == "0") ? 0 : static_cast<int>(int_part.size());

  std::string frac;
  int guard = -1;  // digit used to decide rounding, -1 = exact stop
  while (!rem.is_zero()) {
    rem *= 10;
    const int d = static_cast<int>(Integer(rem / q).convert_to<long>());
    rem %= q;
    if (sig_seen == 0 && d == 0) {
      frac.push_back('0');  // leading zeros are not significant
      continue;
    }
    if (sig_seen == significant) {
      guard = d;
      break;
    }
    frac.push_back(static_cast<char>('0' + d));
    ++sig_seen;
  }

  // Round half-up on the guard digit, propagating the carry.
  if (guard >= 5) {
    std::string digits = int_part + frac;
    int i = static_cast<int>(digits.size()) - 1;
    for (; i >= 0; --i) {
      if (digits[i] == '9') {
        digits[i] = '0';
      } else {
        ++digits[i];
        break;
      }
    }
    if (i < 0) {
      digits.insert(digits.begin(), '1');
      // The carry lengthened the integer part by one digit.
      int_part = digits.substr(0, int_part.size() + 1);
      frac = digits.substr(int_part.size());
    } else {
      int_part = digits.substr(0, int_part.size());
      frac = digits.substr(int_part.size());
    }
  }

  // Trim trailing zeros in the fraction (they carry no information here).
  while (!frac.empty() && frac.back() == '0') {
    frac.pop_back();
  }

  std::string out = negative ? "-" : "";
  out += int_part;
  if (!frac.empty()) {
    out += "." + frac;
  }
  return out;
}

double Rational::to_double() const {
  return value_.convert_to<double>();
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
  return os << r.to_string();
}

}  // namespace cdc
