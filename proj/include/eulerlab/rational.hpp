#pragma once
// Exact rationals and big integers for file input/output.
#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace eulerlab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Parses "n", "-n" or "n/d". Throws SchemaError on malformed text or d = 0.
Rational parse_rational(const std::string& text);
std::string format_rational(const Rational& q);

}  // namespace eulerlab
