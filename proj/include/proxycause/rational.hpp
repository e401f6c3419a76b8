#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace proxycause {

using Rational = mpq_class;

// Parses "p/q", an integer, or an exact decimal ("0.0648", "-1.5e-3").
// Decimals are converted without going through binary floating point.
Rational parse_rational(std::string_view text);

// "p/q" in lowest terms, or "p" when the denominator is 1.
std::string to_fraction_string(const Rational& value);

// Shortest decimal that round-trips the nearest double.
std::string to_decimal_string(double value);
std::string to_decimal_string(const Rational& value);

// Nearest double (mpq_get_d truncates instead).
double to_double(const Rational& value);

// Exact decimal rendering; only valid when the denominator divides a power of 10.
// Returns an empty string otherwise.
std::string to_exact_decimal(const Rational& value);

}  // namespace proxycause
