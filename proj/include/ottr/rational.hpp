#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>

namespace ottr {

/// Exact rational coefficient. GMP keeps results canonical after every
/// arithmetic operation; values built from raw numerator/denominator pairs
/// must go through make_rational.
using Rational = mpq_class;

Rational make_rational(long numerator, long denominator = 1);

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }

/// "p/q" in lowest terms, or "p" when the denominator is 1.
std::string format_rational(const Rational& q);

/// Inverse of format_rational. Rejects anything format_rational would not
/// produce: non-lowest terms ("2/4"), explicit "+", zero or negative
/// denominators, "/1", leading zeros, whitespace.
std::optional<Rational> parse_rational(std::string_view text);

/// Generalized binomial coefficient top*(top-1)*...*(top-k+1)/k!.
Rational binomial(long top, int k);

Rational factorial(int n);

/// (2n+1)!! = 1*3*5*...*(2n+1).
Rational odd_double_factorial(int n);

}  // namespace ottr
