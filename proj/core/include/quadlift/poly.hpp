#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <quadlift/expr.hpp>
#include <quadlift/rational.hpp>

namespace quadlift {

/// Exponent vector over a system's ordered variable list.
using Monomial = std::vector<int>;

Monomial mono_one(std::size_t nvars);
Monomial mono_var(std::size_t nvars, std::size_t index, int exponent = 1);
Monomial mono_mul(const Monomial &a, const Monomial &b);
/// a / b. In standard mode returns nullopt when some exponent would become negative.
std::optional<Monomial> mono_div(const Monomial &a, const Monomial &b, bool laurent = false);
bool mono_divides(const Monomial &a, const Monomial &b);
int mono_degree(const Monomial &m);
bool mono_is_one(const Monomial &m);
bool mono_has_negative(const Monomial &m);

/// Graded lexicographic order, larger monomials first.
struct GrlexGreater {
    bool operator()(const Monomial &a, const Monomial &b) const;
};

struct MonomialHash {
    std::size_t operator()(const Monomial &m) const noexcept;
};

/// Product of atom powers; sorted by atom, no zero exponents.
using AtomPowers = std::vector<std::pair<Expr, int>>;

struct AtomPowersLess {
    bool operator()(const AtomPowers &a, const AtomPowers &b) const;
};

/// Element of the coefficient ring: a Laurent polynomial over Q in atoms.
/// Atoms are parameters or opaque parameter-only expressions such as exp(-b).
class Coefficient {
public:
    using Terms = std::map<AtomPowers, Rational, AtomPowersLess>;

    Coefficient() = default;
    Coefficient(Rational q); // NOLINT(google-explicit-constructor)
    static Coefficient atom(const Expr &a, int exponent = 1);

    /// Converts a parameter-only expression. Subterms that are not Laurent
    /// polynomials in parameters become opaque atoms.
    static Coefficient from_expr(const Expr &e);

    bool is_zero() const noexcept { return m_terms.empty(); }
    bool is_rational() const;
    /// Rational value; requires is_rational().
    Rational rational() const;
    /// One term (a rational times a product of atom powers), hence invertible.
    bool is_monomial() const { return m_terms.size() == 1; }
    Coefficient inverse() const;

    Coefficient operator-() const;
    Coefficient &operator+=(const Coefficient &o);
    Coefficient &operator-=(const Coefficient &o);
    Coefficient &operator*=(const Coefficient &o);
    friend Coefficient operator+(Coefficient a, const Coefficient &b) { return a += b; }
    friend Coefficient operator-(Coefficient a, const Coefficient &b) { return a -= b; }
    friend Coefficient operator*(Coefficient a, const Coefficient &b) { return a *= b; }
    friend bool operator==(const Coefficient &a, const Coefficient &b);
    friend bool operator!=(const Coefficient &a, const Coefficient &b) { return !(a == b); }

    double evaluate(const Env &params) const;
    Expr to_expr() const;
    std::string to_string() const;

    const Terms &terms() const { return m_terms; }

private:
    Terms m_terms;
};

/// Sparse polynomial with terms kept in GrlexGreater order.
class Polynomial {
public:
    using Terms = std::map<Monomial, Coefficient, GrlexGreater>;

    Polynomial() = default;
    explicit Polynomial(std::size_t nvars) : m_nvars(nvars) {}
    static Polynomial constant(std::size_t nvars, const Coefficient &c);
    static Polynomial variable(std::size_t nvars, std::size_t index);
    static Polynomial term(const Monomial &m, const Coefficient &c);

    std::size_t nvars() const noexcept { return m_nvars; }
    bool is_zero() const noexcept { return m_terms.empty(); }
    const Terms &terms() const noexcept { return m_terms; }
    std::size_t size() const noexcept { return m_terms.size(); }

    void add_term(const Monomial &m, const Coefficient &c);

    Polynomial operator-() const;
    Polynomial &operator+=(const Polynomial &o);
    Polynomial &operator-=(const Polynomial &o);
    Polynomial &operator*=(const Polynomial &o);
    Polynomial &operator*=(const Coefficient &c);
    friend Polynomial operator+(Polynomial a, const Polynomial &b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial &b) { return a -= b; }
    friend Polynomial operator*(const Polynomial &a, const Polynomial &b);
    friend Polynomial operator*(Polynomial a, const Coefficient &c) { return a *= c; }
    friend bool operator==(const Polynomial &a, const Polynomial &b);
    friend bool operator!=(const Polynomial &a, const Polynomial &b) { return !(a == b); }

    Polynomial pow(unsigned n) const;
    Polynomial partial_derivative(std::size_t var) const;
    /// Replaces variable `var` by `value` (which must not have negative exponents in `var`'s place).
    Polynomial substitute(std::size_t var, const Polynomial &value) const;
    /// Re-indexes into a larger variable list: variable i goes to position map[i].
    Polynomial embed(std::size_t nvars, const std::vector<std::size_t> &map) const;

    struct Degrees {
        std::vector<int> per_variable;
        int total = -1; // -1 for the zero polynomial
    };
    Degrees degrees() const;

    double evaluate(const std::vector<double> &point, const Env &params) const;
    Expr to_expr(const std::vector<Expr> &symbols) const;
    std::string to_string(const std::vector<std::string> &names) const;

private:
    std::size_t m_nvars = 0;
    Terms m_terms;
};

enum class VarRole { State, Lifted, Input, InputDerivative };

struct LiftedVar {
    std::string name;
    /// Definition in terms of the original states and inputs.
    Expr definition;
    /// Set when the variable is a monomial in earlier variables of the system it was added to.
    std::optional<Monomial> monomial;
    std::string provenance;
};

/// Polynomial ODE system. Variable order: states, lifted, inputs, input derivatives.
struct PolySystem {
    std::vector<std::string> states;
    std::vector<LiftedVar> lifted;
    std::vector<std::string> inputs;
    std::vector<std::string> parameters;
    /// One right-hand side per state, then per lifted variable.
    std::vector<Polynomial> rhs;
    /// Algebraic identities that hold between the variables, each stated as `p = 0`
    /// (for instance v*f - 1 for an inverse lifting v = 1/f).
    std::vector<Polynomial> relations;
    Assumptions assumptions;

    std::size_t dynamic_count() const { return states.size() + lifted.size(); }
    std::size_t nvars() const { return dynamic_count() + 2 * inputs.size(); }
    std::size_t input_index(std::size_t j) const { return dynamic_count() + j; }
    std::size_t input_derivative_index(std::size_t j) const { return dynamic_count() + inputs.size() + j; }
    VarRole role(std::size_t index) const;
    std::string name(std::size_t index) const;
    std::vector<std::string> names() const;
    std::optional<std::size_t> index_of(const std::string &name) const;
    /// Variable symbol used when rendering rows as expressions.
    Expr symbol(std::size_t index) const;
    std::vector<Expr> symbols() const;
    /// Definition of variable `index` over the original states and inputs.
    Expr definition(std::size_t index) const;

    const Polynomial &rhs_of(std::size_t dynamic_index) const { return rhs.at(dynamic_index); }
    std::string render() const;
};

/// Time derivative of m along the system: sum_i (d m / d x_i) * rhs_i, with
/// inputs differentiated into their derivative symbols. Throws MissingRhsError
/// when m involves an input-derivative symbol.
Polynomial lie_derivative(const Monomial &m, const PolySystem &sys);
Polynomial lie_derivative(const Polynomial &p, const PolySystem &sys);

/// Outcome of converting an expression: the polynomial, or the first
/// subterm (leftmost-innermost) that is not polynomial.
using ConversionResult = std::variant<Polynomial, Expr>;

/// Called on every subterm that contains a variable before structural
/// conversion; returning a polynomial short-circuits the subterm.
using ConversionHook = std::function<std::optional<Polynomial>(const Expr &)>;

struct ConversionContext {
    std::size_t nvars = 0;
    /// Variable symbol name -> index.
    std::map<std::string, std::size_t> index;
    bool laurent = false;
    ConversionHook hook;
};

ConversionResult to_polynomial(const Expr &e, const ConversionContext &ctx);

/// Context for converting rows that mention the system's own variable symbols.
ConversionContext conversion_context(const PolySystem &sys, bool laurent = false);

} // namespace quadlift
