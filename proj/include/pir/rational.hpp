#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace pir {

// Exact arithmetic for probabilities and expected bit counts. Denominators
// like 2^(kR) overflow machine words quickly, so these are arbitrary
// precision.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// "3/2" for non-integers, plain digits for integers.
std::string rational_to_string(const Rational& r);

// Fixed-point decimal rendering for tables.
std::string rational_to_decimal(const Rational& r, unsigned digits = 4);

}  // namespace pir
