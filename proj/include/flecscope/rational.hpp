#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace flecscope {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// Exact conversion; every finite double is a dyadic rational.
Rational rational_from_double(double v);

// Accepts "3", "-7/2", "0.25", "-1.5e0" (plain decimal, no exponent).
Rational parse_rational(const std::string& s);

std::string to_string(const Rational& r);

}  // namespace flecscope
