#pragma once

#include <string>

#include <quadlift/expr.hpp>

namespace quadlift {

/// Zero test for expressions over exp/log/trigonometric kernels and rational
/// powers of sums.
///
/// The expression is mapped to a generalized polynomial whose "monomials" are
/// products of rational powers of symbols, exponential kernels exp(M) for
/// monomials M, opaque function applications and normalized sum bases.
/// Negative and fractional powers of sums are cleared by multiplying with a
/// suitable power of the base (which is nonzero wherever the expression is
/// defined) and integer powers are expanded until no sum base is left to
/// expand. A true result is therefore a proof; false means either nonzero or
/// not provable by this procedure.
bool is_identically_zero(const Expr &e);

/// Rendering of the normal form before sum bases are cleared. Used in
/// diagnostics and tests.
std::string normal_form_string(const Expr &e);

} // namespace quadlift
