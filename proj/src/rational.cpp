#include "pir/rational.hpp"

#include <sstream>

namespace pir {

std::string rational_to_string(const Rational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

std::string rational_to_decimal(const Rational& r, unsigned digits) {
  const bool negative = r < 0;
  Rational abs = negative ? Rational(-r) : r;
  BigInt scale = 1;
  for (unsigned i = 0; i < digits; ++i) scale *= 10;
  // Round half up at the last digit.
  const BigInt scaled =
      (boost::multiprecision::numerator(abs) * scale * 2 +
       boost::multiprecision::denominator(abs)) /
      (boost::multiprecision::denominator(abs) * 2);
  const BigInt whole = scaled / scale;
  BigInt frac = scaled % scale;
  std::ostringstream os;
  if (negative) os << '-';
  os << whole;
  if (digits > 0) {
    std::string f = frac.str();
    os << '.' << std::string(digits - f.size(), '0') << f;
  }
  std::string s = os.str();
  // Trim trailing zeros but keep at least one decimal.
  if (s.find('.') != std::string::npos) {
    size_t last = s.find_last_not_of('0');
    if (s[last] == '.') ++last;
    s.erase(last + 1);
  }
  return s;
}

}  // namespace pir
