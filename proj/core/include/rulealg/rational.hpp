#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace rulealg {

/// Exact arbitrary-precision rational coefficient type. Every algebraic
/// identity in the engine is checked with these; floating point is confined
/// to the stochastic layer.
using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

/// Canonical "p/q" form (denominator always present, q > 0).
std::string rational_to_string(const Rational& r);

/// Parses "p" or "p/q"; throws std::invalid_argument on malformed input.
Rational rational_from_string(const std::string& s);

}  // namespace rulealg
