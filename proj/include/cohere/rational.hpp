#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>

namespace cohere {

using Rational = boost::multiprecision::mpq_rational;

/**
 * Parse an exact rational from "p/q", an integer, or a decimal such as
 * "-0.25". Decimals are converted exactly. Throws std::invalid_argument.
 */
Rational parse_rational(std::string_view text);

/** Lowest-terms rendering: "p/q", or "p" when the denominator is 1. */
std::string to_string(const Rational& value);

/// Simplest rational (smallest denominator, then smallest magnitude) in [lo, hi].
Rational simplest_between(const Rational& lo, const Rational& hi);

/// 2^-k as an exact rational.
Rational pow2_neg(unsigned k);

}  // namespace cohere
