#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace quadlift {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    enum class Kind { Syntax, UndeclaredSymbol, DuplicateEquation, MissingEquation, Declaration };

    ParseError(Kind kind, std::size_t line, std::size_t column, const std::string &message);

    Kind kind() const noexcept { return m_kind; }
    std::size_t line() const noexcept { return m_line; }
    std::size_t column() const noexcept { return m_column; }
    const std::string &detail() const noexcept { return m_detail; }

private:
    Kind m_kind;
    std::size_t m_line;
    std::size_t m_column;
    std::string m_detail;
};

/// Evaluation or simplification at a point where an expression is undefined.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A Lie derivative was requested for a symbol that has neither an equation nor a derivative symbol.
class MissingRhsError : public Error {
public:
    using Error::Error;
};

class PolynomializationError : public Error {
public:
    enum class Kind { UnsupportedFunction, NonIntegerResidualExponent, TooManyVariables };

    PolynomializationError(Kind kind, const std::string &message) : Error(message), m_kind(kind) {}

    Kind kind() const noexcept { return m_kind; }

private:
    Kind m_kind;
};

class SimulationError : public Error {
public:
    enum class Kind { NonFiniteState, InvalidStep, DimensionMismatch, MissingParameter };

    SimulationError(Kind kind, const std::string &message) : Error(message), m_kind(kind) {}

    Kind kind() const noexcept { return m_kind; }

private:
    Kind m_kind;
};

} // namespace quadlift
