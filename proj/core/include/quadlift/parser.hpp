#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <quadlift/expr.hpp>

namespace quadlift {

/// Rank offsets used for variable symbols. States get their declaration
/// index, inputs follow the states, and symbols introduced later (lifted
/// variables, input derivatives) sort after everything declared in the file.
inline constexpr int kLiftedRankBase = 1 << 20;
inline constexpr int kInputDerivativeRankBase = 1 << 21;

/// Name of the formal derivative symbol of an input, e.g. `u'`.
std::string derivative_name(const std::string &input);

struct SystemAST {
    std::vector<std::string> states;
    std::vector<std::string> inputs;
    std::vector<std::string> parameters;
    std::map<std::string, Expr> equations;
    /// Free-text `assume` lines, kept verbatim.
    std::vector<std::string> domain_notes;
    /// Positivity facts extracted from notes of the form `name > 0`.
    Assumptions assumptions;

    Expr state_symbol(std::size_t i) const;
    Expr input_symbol(std::size_t j) const;
    Expr input_derivative_symbol(std::size_t j) const;
    const Expr &rhs(const std::string &state) const;
};

/// Maps identifiers to the expression they stand for while parsing.
struct SymbolTable {
    std::map<std::string, Expr> symbols;
    /// Inputs whose derivative symbol `name'` may appear in expressions.
    std::map<std::string, Expr> derivative_symbols;
};

/// States, inputs, parameters and input derivatives of a system.
SymbolTable symbol_table(const SystemAST &system);

/// Parses the `.ode` format:
///
///     vars x, y;
///     inputs u;          # optional
///     params a, b;       # optional
///     assume x > 0;      # optional, repeatable
///     x' = -a*x + y^2;
///     y' = exp(-x)*u;
///
/// Throws ParseError with 1-based line and column.
SystemAST parse_system(std::string_view text);

/// Parses a single expression against an existing symbol table.
Expr parse_expression(std::string_view text, const SymbolTable &symbols);

/// Renders a system in the input format; parse_system(print_system(s)) reproduces s.
std::string print_system(const SystemAST &system);

} // namespace quadlift
