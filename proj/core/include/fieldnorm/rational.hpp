#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace fieldnorm {

/// Exact arithmetic for weights, baselines and ratios. Every indicator is
/// computed without rounding; decimals only appear when printing.
using Rational = mpq_class;

/// Fixed-point rendering, rounding half away from zero: to_fixed(2/3, 3) == "0.667".
std::string to_fixed(const Rational& value, int digits = 12);

/// Canonical "p/q" (or "p" when q == 1), always reduced.
std::string to_exact(const Rational& value);

/// Inverse of to_exact. Throws Error("malformed number") on bad input.
Rational parse_exact(std::string_view text);

/// Parses a plain decimal literal ("0.25", "3", "-1.5") into its exact value.
Rational parse_decimal(std::string_view text);

double to_double(const Rational& value);

}  // namespace fieldnorm
