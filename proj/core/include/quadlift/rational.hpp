#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace quadlift {

/// Exact rational numbers backed by GMP.
using Rational = mpq_class;

/// Renders as `p` or `p/q` (lowest terms, sign on the numerator).
std::string to_string(const Rational& q);

/// Parses a decimal literal (`12`, `1.5`, `2.5e-3`) exactly.
Rational parse_decimal(std::string_view text);

bool is_integer(const Rational& q);

/// Numerator of an integral rational; throws std::overflow_error when it does not fit in an int.
int to_int(const Rational& q);

double to_double(const Rational& q);

/// gcd(a, b) for rationals in lowest terms: gcd of numerators over lcm of denominators.
/// Always non-negative; zero iff both are zero.
Rational gcd(const Rational& a, const Rational& b);

/// q^n for integer n (n may be negative when q is nonzero).
Rational pow(const Rational& q, long n);

} // namespace quadlift
