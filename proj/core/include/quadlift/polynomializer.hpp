#pragma once

#include <string>
#include <vector>

#include <quadlift/parser.hpp>
#include <quadlift/poly.hpp>

namespace quadlift {

struct PolynomializeOptions {
    /// Allow the rational-power rule w = f^(p/q), v = 1/f.
    bool power_rule = true;
    /// Hard cap on the number of introduced variables.
    std::size_t max_new_variables = 128;
    /// Prefix for introduced variable names (w1, w2, ...).
    std::string prefix = "w";
};

struct PolynomializeResult {
    PolySystem system;
    /// Same entries as system.lifted, kept for callers that only need the lifting.
    std::vector<LiftedVar> lifting;
};

/// Introduces lifting variables until every right-hand side is polynomial.
///
/// Rows are converted in order (states first, then lifted variables); the
/// first subterm that does not convert (leftmost-innermost) is lifted with the
/// matching rule and the scan restarts. Definitions are kept as expressions
/// over the original states and inputs.
///
/// Throws PolynomializationError.
PolynomializeResult polynomialize(const SystemAST &system, const PolynomializeOptions &options = {});

/// Rewrites families of exponentials whose variable parts are rational
/// multiples of one polynomial L into powers of a single exp(g*L). Families
/// are split by sign so that every resulting power is a positive integer.
SystemAST exp_gcd_heuristic(const SystemAST &system);

/// True when every row is a polynomial over the system's declared variables.
bool verify_polynomial(const PolySystem &system);
/// True when every equation of the expression system is already polynomial.
bool verify_polynomial(const SystemAST &system);

/// Converts a polynomial expression system without lifting.
/// Throws PolynomializationError if some equation is not polynomial.
PolySystem to_poly_system(const SystemAST &system);

} // namespace quadlift
