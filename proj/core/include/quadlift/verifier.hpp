#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <quadlift/parser.hpp>
#include <quadlift/poly.hpp>
#include <quadlift/simulate.hpp>

namespace quadlift {

struct RowResidual {
    std::string variable;
    bool zero = false;
    /// Normal form of lhs - rhs; "0" when the row holds.
    std::string residual;
};

struct NumericCheck {
    /// Initial values of the original states.
    std::vector<double> x0;
    SimulationSetup setup;
};

struct VerificationReport {
    bool symbolic_ok = false;
    std::vector<RowResidual> residuals;
    /// Per variable of the checked system: max deviation from its definition
    /// evaluated along the original trajectory.
    std::map<std::string, double> numeric_max_error;
    std::optional<double> reconstruction_error;

    std::string to_string() const;
};

/// Checks every row of `lifted` against the original system: a state row must
/// equal the original right-hand side and a lifted row must equal the time
/// derivative of the variable's definition (chain rule through the original
/// right-hand sides), after substituting all definitions. Mismatches are
/// reported, not thrown. With `numeric`, both systems are also simulated.
VerificationReport verify_certificate(const SystemAST &original, const PolySystem &lifted,
                                      const std::optional<NumericCheck> &numeric = std::nullopt);

/// Time derivative of an expression over the original states and inputs.
Expr time_derivative(const Expr &e, const SystemAST &original);

} // namespace quadlift
