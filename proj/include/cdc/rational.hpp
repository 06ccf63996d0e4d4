#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace cdc {

// All load figures and bounds are kept exact; nothing in the core ever
// touches floating point.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Exact binomial coefficient with arbitrary precision.
BigInt binom_big(int n, int k);

// "num/den" in lowest terms ("3", "2/5", "-1/3").
std::string to_fraction_string(const Rational& r);

// Accepts "p/q", integers, and plain decimals ("2.5" -> 5/2).
Rational parse_rational(const std::string& text);

// Nearest double, for display only.
double to_double(const Rational& r);

}  // namespace cdc
