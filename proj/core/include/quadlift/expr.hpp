#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <quadlift/rational.hpp>

namespace quadlift {

/// Node variants of the expression tree. The enumeration order is part of the
/// canonical total order on expressions: constants sort first, then parameter
/// atoms, variables, and finally composite nodes by tag.
enum class Kind : std::uint8_t { Constant, Parameter, Variable, Sum, Product, Power, Exp, Log, Sin, Cos, Tan, Sinh, Cosh };

bool is_function(Kind k) noexcept;
std::string_view function_name(Kind k);

/// Domain assumptions recorded with a system. Only positivity of symbols is
/// understood; everything else is kept as free text by the caller.
struct Assumptions {
    std::set<std::string> positive;
};

/// Immutable, shared expression node handle.
///
/// Values built through the free functions `sum`, `product`, `power` and
/// `function` (and the arithmetic operators) are in canonical form: sums and
/// products are flattened and sorted, like terms and like bases are merged,
/// constants are folded, and exponents 0 and 1 never survive. The `raw_*`
/// factories build nodes verbatim; `simplify` brings such trees into canonical
/// form.
class Expr {
public:
    Expr();

    static Expr constant(Rational value);
    static Expr integer(long value);
    static Expr parameter(std::string name);
    /// `rank` is the declaration rank used by the canonical order (states, then inputs, then lifted symbols).
    static Expr variable(std::string name, int rank);

    static Expr raw_sum(std::vector<Expr> terms);
    static Expr raw_product(std::vector<Expr> factors);
    static Expr raw_power(Expr base, Rational exponent);
    static Expr raw_function(Kind kind, Expr argument);

    Kind kind() const noexcept;
    bool is(Kind k) const noexcept { return kind() == k; }
    bool is_constant() const noexcept { return kind() == Kind::Constant; }
    bool is_zero() const noexcept;
    bool is_one() const noexcept;

    const Rational &value() const;
    const std::string &name() const;
    int rank() const;
    const std::vector<Expr> &operands() const;
    const Expr &base() const;
    const Rational &exponent() const;
    const Expr &argument() const;

    std::size_t hash() const noexcept;

private:
    struct Node;
    explicit Expr(std::shared_ptr<const Node> node);

    std::shared_ptr<const Node> m_node;
};

/// Canonical total order; returns <0, 0 or >0.
int compare(const Expr &a, const Expr &b);
bool operator==(const Expr &a, const Expr &b);
inline bool operator!=(const Expr &a, const Expr &b) { return !(a == b); }

struct ExprLess {
    bool operator()(const Expr &a, const Expr &b) const { return compare(a, b) < 0; }
};

struct ExprHash {
    std::size_t operator()(const Expr &e) const noexcept { return e.hash(); }
};

// Canonicalizing constructors. `assumptions` enables rewrites that are valid
// only on the recorded domain, e.g. (x^2)^(1/2) -> x under x > 0.
Expr sum(std::vector<Expr> terms, const Assumptions *assumptions = nullptr);
Expr product(std::vector<Expr> factors, const Assumptions *assumptions = nullptr);
Expr power(const Expr &base, const Rational &exponent, const Assumptions *assumptions = nullptr);
Expr function(Kind kind, const Expr &argument);

Expr operator+(const Expr &a, const Expr &b);
Expr operator-(const Expr &a, const Expr &b);
Expr operator-(const Expr &a);
Expr operator*(const Expr &a, const Expr &b);
Expr operator/(const Expr &a, const Expr &b);

/// Rebuilds `e` bottom-up through the canonical constructors. Idempotent.
Expr simplify(const Expr &e, const Assumptions &assumptions = {});

/// Exact partial derivative with respect to the variable named `var`.
Expr diff(const Expr &e, const std::string &var);

/// Replaces variables by name and re-canonicalizes.
Expr substitute(const Expr &e, const std::map<std::string, Expr> &replacements);

bool depends_on(const Expr &e, const std::string &var);
/// True when no Variable node occurs in `e`.
bool is_parameter_only(const Expr &e);
/// Polynomial in its variables, with arbitrary parameter-only subexpressions as coefficients.
bool is_polynomial_in_variables(const Expr &e);
bool is_positive(const Expr &e, const Assumptions &assumptions);

void collect_variables(const Expr &e, std::set<std::string> &out);
void collect_parameters(const Expr &e, std::set<std::string> &out);

/// Renders in the input grammar, so that parsing the output gives back the same canonical tree.
std::string to_string(const Expr &e);

using Env = std::unordered_map<std::string, double>;

/// Floating-point evaluation. Throws DomainError for log of a non-positive
/// value, division by zero, and non-integer powers of negative numbers, and
/// std::out_of_range for unbound symbols.
double evaluate(const Expr &e, const Env &env);

} // namespace quadlift
