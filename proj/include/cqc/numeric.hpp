#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace cqc {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline std::string to_string(const BigInt& v) { return v.str(); }

// "p/q" with q omitted when it is 1.
std::string to_string(const Rational& v);

// Accepts "p", "-p" and "p/q".
Rational parse_rational(const std::string& s);

BigInt power(const BigInt& base, unsigned exp);
BigInt binomial(unsigned n, unsigned k);
BigInt factorial(unsigned n);

}  // namespace cqc
