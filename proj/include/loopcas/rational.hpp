#ifndef LOOPCAS_RATIONAL_HPP
#define LOOPCAS_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace loopcas {

// Exact rational coefficients. cpp_rational keeps values reduced with a
// positive denominator, which is exactly the canonical form we need.
using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Parses "p" or "p/q" with optional leading '-'. Throws InvalidRational on
// malformed input or q == 0.
Rational rat_parse(const std::string& text);

// Renders "p" or "p/q", denominator omitted when 1.
std::string rat_render(const Rational& r);

Rational rat_binomial(long n, long k);  // n may be negative (generalized)
Rational rat_factorial(long n);

}  // namespace loopcas

#endif
