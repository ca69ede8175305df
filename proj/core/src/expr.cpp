#include <quadlift/errors.hpp>
#include <quadlift/expr.hpp>

#include <algorithm>
#include <cassert>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace quadlift {

struct Expr::Node {
    Kind kind = Kind::Constant;
    Rational value;   // Constant value or Power exponent
    std::string name; // Parameter / Variable
    int rank = 0;
    std::vector<Expr> children;
    std::size_t hash = 0;
};

namespace {

std::size_t hash_combine(std::size_t seed, std::size_t v)
{
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t hash_rational(const Rational &q)
{
    return hash_combine(std::hash<long>{}(mpz_get_si(q.get_num_mpz_t())),
                        std::hash<long>{}(mpz_get_si(q.get_den_mpz_t())));
}

std::size_t compute_hash(Kind kind, const Rational &value, const std::string &name, int rank,
                         const std::vector<Expr> &children)
{
    std::size_t h = std::hash<int>{}(static_cast<int>(kind));
    switch (kind) {
    case Kind::Constant:
        h = hash_combine(h, hash_rational(value));
        break;
    case Kind::Parameter:
        h = hash_combine(h, std::hash<std::string>{}(name));
        break;
    case Kind::Variable:
        h = hash_combine(h, std::hash<std::string>{}(name));
        h = hash_combine(h, std::hash<int>{}(rank));
        break;
    case Kind::Power:
        h = hash_combine(h, hash_rational(value));
        [[fallthrough]];
    default:
        for (const auto &c : children) {
            h = hash_combine(h, c.hash());
        }
    }
    return h;
}

const Expr &zero_expr()
{
    static const Expr z = Expr::integer(0);
    return z;
}

} // namespace

Expr::Expr() : Expr(zero_expr()) {}

Expr::Expr(std::shared_ptr<const Node> node) : m_node(std::move(node)) {}

Expr Expr::constant(Rational value)
{
    value.canonicalize();
    auto n = std::make_shared<Node>();
    n->kind = Kind::Constant;
    n->value = std::move(value);
    n->hash = compute_hash(n->kind, n->value, n->name, 0, n->children);
    return Expr(std::move(n));
}

Expr Expr::integer(long value)
{
    return constant(Rational(value));
}

Expr Expr::parameter(std::string name)
{
    auto n = std::make_shared<Node>();
    n->kind = Kind::Parameter;
    n->name = std::move(name);
    n->hash = compute_hash(n->kind, n->value, n->name, 0, n->children);
    return Expr(std::move(n));
}

Expr Expr::variable(std::string name, int rank)
{
    auto n = std::make_shared<Node>();
    n->kind = Kind::Variable;
    n->name = std::move(name);
    n->rank = rank;
    n->hash = compute_hash(n->kind, n->value, n->name, rank, n->children);
    return Expr(std::move(n));
}

Expr Expr::raw_sum(std::vector<Expr> terms)
{
    auto n = std::make_shared<Node>();
    n->kind = Kind::Sum;
    n->children = std::move(terms);
    n->hash = compute_hash(n->kind, n->value, n->name, 0, n->children);
    return Expr(std::move(n));
}

Expr Expr::raw_product(std::vector<Expr> factors)
{
    auto n = std::make_shared<Node>();
    n->kind = Kind::Product;
    n->children = std::move(factors);
    n->hash = compute_hash(n->kind, n->value, n->name, 0, n->children);
    return Expr(std::move(n));
}

Expr Expr::raw_power(Expr base, Rational exponent)
{
    exponent.canonicalize();
    auto n = std::make_shared<Node>();
    n->kind = Kind::Power;
    n->value = std::move(exponent);
    n->children.push_back(std::move(base));
    n->hash = compute_hash(n->kind, n->value, n->name, 0, n->children);
    return Expr(std::move(n));
}

Expr Expr::raw_function(Kind kind, Expr argument)
{
    if (!is_function(kind)) {
        throw std::logic_error("raw_function called with a non-function kind");
    }
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->children.push_back(std::move(argument));
    n->hash = compute_hash(n->kind, n->value, n->name, 0, n->children);
    return Expr(std::move(n));
}

Kind Expr::kind() const noexcept
{
    return m_node->kind;
}

bool Expr::is_zero() const noexcept
{
    return m_node->kind == Kind::Constant && m_node->value == 0;
}

bool Expr::is_one() const noexcept
{
    return m_node->kind == Kind::Constant && m_node->value == 1;
}

const Rational &Expr::value() const
{
    assert(kind() == Kind::Constant);
    return m_node->value;
}

const std::string &Expr::name() const
{
    assert(kind() == Kind::Parameter || kind() == Kind::Variable);
    return m_node->name;
}

int Expr::rank() const
{
    return m_node->rank;
}

const std::vector<Expr> &Expr::operands() const
{
    return m_node->children;
}

const Expr &Expr::base() const
{
    assert(kind() == Kind::Power);
    return m_node->children.front();
}

const Rational &Expr::exponent() const
{
    assert(kind() == Kind::Power);
    return m_node->value;
}

const Expr &Expr::argument() const
{
    assert(is_function(kind()));
    return m_node->children.front();
}

std::size_t Expr::hash() const noexcept
{
    return m_node->hash;
}

bool is_function(Kind k) noexcept
{
    return k >= Kind::Exp;
}

std::string_view function_name(Kind k)
{
    switch (k) {
    case Kind::Exp:
        return "exp";
    case Kind::Log:
        return "log";
    case Kind::Sin:
        return "sin";
    case Kind::Cos:
        return "cos";
    case Kind::Tan:
        return "tan";
    case Kind::Sinh:
        return "sinh";
    case Kind::Cosh:
        return "cosh";
    default:
        throw std::logic_error("not a function kind");
    }
}

// ---------------------------------------------------------------------------
// Canonical order

int compare(const Expr &a, const Expr &b)
{
    if (a.kind() != b.kind()) {
        return static_cast<int>(a.kind()) < static_cast<int>(b.kind()) ? -1 : 1;
    }
    switch (a.kind()) {
    case Kind::Constant:
        return cmp(a.value(), b.value()) < 0 ? -1 : (cmp(a.value(), b.value()) > 0 ? 1 : 0);
    case Kind::Parameter:
        return a.name().compare(b.name()) < 0 ? -1 : (a.name() == b.name() ? 0 : 1);
    case Kind::Variable:
        if (a.rank() != b.rank()) {
            return a.rank() < b.rank() ? -1 : 1;
        }
        return a.name().compare(b.name()) < 0 ? -1 : (a.name() == b.name() ? 0 : 1);
    case Kind::Power: {
        if (int c = compare(a.base(), b.base()); c != 0) {
            return c;
        }
        int c = cmp(a.exponent(), b.exponent());
        return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    default: {
        const auto &x = a.operands();
        const auto &y = b.operands();
        const std::size_t n = std::min(x.size(), y.size());
        for (std::size_t i = 0; i < n; ++i) {
            if (int c = compare(x[i], y[i]); c != 0) {
                return c;
            }
        }
        if (x.size() != y.size()) {
            return x.size() < y.size() ? -1 : 1;
        }
        return 0;
    }
    }
}

bool operator==(const Expr &a, const Expr &b)
{
    if (a.hash() != b.hash()) {
        return false;
    }
    return compare(a, b) == 0;
}

// ---------------------------------------------------------------------------
// Predicates

bool depends_on(const Expr &e, const std::string &var)
{
    switch (e.kind()) {
    case Kind::Constant:
    case Kind::Parameter:
        return false;
    case Kind::Variable:
        return e.name() == var;
    default:
        return std::any_of(e.operands().begin(), e.operands().end(),
                           [&](const Expr &c) { return depends_on(c, var); });
    }
}

bool is_parameter_only(const Expr &e)
{
    switch (e.kind()) {
    case Kind::Constant:
    case Kind::Parameter:
        return true;
    case Kind::Variable:
        return false;
    default:
        return std::all_of(e.operands().begin(), e.operands().end(), is_parameter_only);
    }
}

bool is_polynomial_in_variables(const Expr &e)
{
    if (is_parameter_only(e)) {
        return true;
    }
    switch (e.kind()) {
    case Kind::Variable:
        return true;
    case Kind::Sum:
    case Kind::Product:
        return std::all_of(e.operands().begin(), e.operands().end(), is_polynomial_in_variables);
    case Kind::Power:
        return is_integer(e.exponent()) && e.exponent() > 0 && is_polynomial_in_variables(e.base());
    default:
        return false;
    }
}

bool is_positive(const Expr &e, const Assumptions &assumptions)
{
    switch (e.kind()) {
    case Kind::Constant:
        return e.value() > 0;
    case Kind::Parameter:
    case Kind::Variable:
        return assumptions.positive.count(e.name()) != 0;
    case Kind::Exp:
    case Kind::Cosh:
        return true;
    case Kind::Sum:
    case Kind::Product:
        return std::all_of(e.operands().begin(), e.operands().end(),
                           [&](const Expr &c) { return is_positive(c, assumptions); });
    case Kind::Power:
        return is_positive(e.base(), assumptions);
    default:
        return false;
    }
}

void collect_variables(const Expr &e, std::set<std::string> &out)
{
    if (e.kind() == Kind::Variable) {
        out.insert(e.name());
        return;
    }
    if (e.kind() == Kind::Constant || e.kind() == Kind::Parameter) {
        return;
    }
    for (const auto &c : e.operands()) {
        collect_variables(c, out);
    }
}

void collect_parameters(const Expr &e, std::set<std::string> &out)
{
    if (e.kind() == Kind::Parameter) {
        out.insert(e.name());
        return;
    }
    if (e.kind() == Kind::Constant || e.kind() == Kind::Variable) {
        return;
    }
    for (const auto &c : e.operands()) {
        collect_parameters(c, out);
    }
}

// ---------------------------------------------------------------------------
// Canonical constructors

namespace {

// Splits a canonical term into its rational coefficient and the remaining factor.
std::pair<Rational, Expr> split_coefficient(const Expr &t)
{
    if (t.kind() == Kind::Product && t.operands().front().is_constant()) {
        const auto &ops = t.operands();
        if (ops.size() == 2) {
            return {ops[0].value(), ops[1]};
        }
        return {ops[0].value(), Expr::raw_product(std::vector<Expr>(ops.begin() + 1, ops.end()))};
    }
    return {Rational(1), t};
}

Expr scale(const Rational &c, const Expr &rest)
{
    if (c == 1) {
        return rest;
    }
    if (rest.kind() == Kind::Product) {
        std::vector<Expr> ops;
        ops.reserve(rest.operands().size() + 1);
        ops.push_back(Expr::constant(c));
        ops.insert(ops.end(), rest.operands().begin(), rest.operands().end());
        return Expr::raw_product(std::move(ops));
    }
    return Expr::raw_product({Expr::constant(c), rest});
}

bool is_negative_term(const Expr &t)
{
    if (t.is_constant()) {
        return t.value() < 0;
    }
    return t.kind() == Kind::Product && t.operands().front().is_constant() && t.operands().front().value() < 0;
}

} // namespace

Expr sum(std::vector<Expr> terms, const Assumptions *)
{
    std::vector<Expr> flat;
    flat.reserve(terms.size());
    for (auto &t : terms) {
        if (t.kind() == Kind::Sum) {
            flat.insert(flat.end(), t.operands().begin(), t.operands().end());
        } else {
            flat.push_back(std::move(t));
        }
    }

    Rational constant(0);
    std::map<Expr, Rational, ExprLess> collected;
    for (const auto &t : flat) {
        if (t.is_constant()) {
            constant += t.value();
            continue;
        }
        auto [c, rest] = split_coefficient(t);
        auto [it, inserted] = collected.emplace(rest, c);
        if (!inserted) {
            it->second += c;
        }
    }

    std::vector<Expr> out;
    out.reserve(collected.size() + 1);
    if (constant != 0) {
        out.push_back(Expr::constant(constant));
    }
    for (const auto &[rest, c] : collected) {
        if (c != 0) {
            out.push_back(scale(c, rest));
        }
    }
    if (out.empty()) {
        return Expr::integer(0);
    }
    if (out.size() == 1) {
        return out.front();
    }
    std::sort(out.begin(), out.end(), ExprLess{});
    return Expr::raw_sum(std::move(out));
}

Expr product(std::vector<Expr> factors, const Assumptions *assumptions)
{
    std::vector<Expr> flat;
    flat.reserve(factors.size());
    for (auto &f : factors) {
        if (f.kind() == Kind::Product) {
            flat.insert(flat.end(), f.operands().begin(), f.operands().end());
        } else {
            flat.push_back(std::move(f));
        }
    }

    Rational c(1);
    std::map<Expr, Rational, ExprLess> powers;
    for (const auto &f : flat) {
        if (f.is_constant()) {
            c *= f.value();
            if (c == 0) {
                return Expr::integer(0);
            }
            continue;
        }
        const Expr &b = f.kind() == Kind::Power ? f.base() : f;
        const Rational r = f.kind() == Kind::Power ? f.exponent() : Rational(1);
        auto [it, inserted] = powers.emplace(b, r);
        if (!inserted) {
            it->second += r;
        }
    }

    // Exp(a) * Exp(b) -> Exp(a + b) for bare exponentials with polynomial arguments.
    std::vector<Expr> exp_args;
    for (auto it = powers.begin(); it != powers.end();) {
        if (it->first.kind() == Kind::Exp && it->second == 1 && is_polynomial_in_variables(it->first.argument())) {
            exp_args.push_back(it->first.argument());
            it = powers.erase(it);
        } else {
            ++it;
        }
    }
    if (exp_args.size() == 1) {
        powers.emplace(function(Kind::Exp, exp_args.front()), Rational(1));
    } else if (exp_args.size() > 1) {
        Expr merged = function(Kind::Exp, sum(std::move(exp_args), assumptions));
        if (merged.is_constant()) {
            c *= merged.value();
        } else {
            auto [it, inserted] = powers.emplace(merged, Rational(1));
            if (!inserted) {
                it->second += 1;
            }
        }
    }

    std::vector<Expr> out;
    out.reserve(powers.size() + 1);
    for (const auto &[b, r] : powers) {
        if (r == 0) {
            continue;
        }
        Expr f = power(b, r, assumptions);
        if (f.is_constant()) {
            c *= f.value();
        } else if (f.kind() == Kind::Product) {
            for (const auto &g : f.operands()) {
                if (g.is_constant()) {
                    c *= g.value();
                } else {
                    out.push_back(g);
                }
            }
        } else {
            out.push_back(std::move(f));
        }
    }
    if (c == 0) {
        return Expr::integer(0);
    }
    if (out.empty()) {
        return Expr::constant(c);
    }
    std::sort(out.begin(), out.end(), ExprLess{});
    if (c == 1 && out.size() == 1) {
        return out.front();
    }
    if (c != 1) {
        out.insert(out.begin(), Expr::constant(c));
    }
    return Expr::raw_product(std::move(out));
}

Expr power(const Expr &base, const Rational &exponent, const Assumptions *assumptions)
{
    if (exponent == 0) {
        return Expr::integer(1);
    }
    if (exponent == 1) {
        return base;
    }
    const bool integral = is_integer(exponent);
    switch (base.kind()) {
    case Kind::Constant: {
        const Rational &v = base.value();
        if (integral) {
            if (v == 0 && exponent < 0) {
                throw DomainError("division by zero");
            }
            return Expr::constant(pow(v, exponent.get_num().get_si()));
        }
        if (v == 0) {
            if (exponent < 0) {
                throw DomainError("division by zero");
            }
            return Expr::integer(0);
        }
        if (v == 1) {
            return Expr::integer(1);
        }
        if (v < 0) {
            throw DomainError("non-integer power of the negative constant " + to_string(v));
        }
        return Expr::raw_power(base, exponent);
    }
    case Kind::Power: {
        const Rational &p = base.exponent();
        if (integral || !is_integer(p) || (assumptions != nullptr && is_positive(base.base(), *assumptions))) {
            return power(base.base(), p * exponent, assumptions);
        }
        return Expr::raw_power(base, exponent);
    }
    case Kind::Product: {
        bool distribute = integral;
        if (!distribute && assumptions != nullptr) {
            distribute = is_positive(base, *assumptions);
        }
        if (!distribute) {
            return Expr::raw_power(base, exponent);
        }
        std::vector<Expr> parts;
        parts.reserve(base.operands().size());
        for (const auto &f : base.operands()) {
            parts.push_back(power(f, exponent, assumptions));
        }
        return product(std::move(parts), assumptions);
    }
    default:
        return Expr::raw_power(base, exponent);
    }
}

Expr function(Kind kind, const Expr &argument)
{
    switch (kind) {
    case Kind::Exp:
        if (argument.is_zero()) {
            return Expr::integer(1);
        }
        if (argument.kind() == Kind::Log) {
            return argument.argument();
        }
        break;
    case Kind::Log:
        if (argument.is_one()) {
            return Expr::integer(0);
        }
        if (argument.is_constant() && argument.value() <= 0) {
            throw DomainError("log of the non-positive constant " + to_string(argument.value()));
        }
        if (argument.kind() == Kind::Exp) {
            return argument.argument();
        }
        break;
    case Kind::Sin:
    case Kind::Tan:
    case Kind::Sinh:
        if (argument.is_zero()) {
            return Expr::integer(0);
        }
        break;
    case Kind::Cos:
    case Kind::Cosh:
        if (argument.is_zero()) {
            return Expr::integer(1);
        }
        break;
    default:
        throw std::logic_error("function() called with a non-function kind");
    }
    return Expr::raw_function(kind, argument);
}

Expr operator+(const Expr &a, const Expr &b)
{
    return sum({a, b});
}

Expr operator-(const Expr &a, const Expr &b)
{
    return sum({a, product({Expr::integer(-1), b})});
}

Expr operator-(const Expr &a)
{
    return product({Expr::integer(-1), a});
}

Expr operator*(const Expr &a, const Expr &b)
{
    return product({a, b});
}

Expr operator/(const Expr &a, const Expr &b)
{
    return product({a, power(b, Rational(-1))});
}

Expr simplify(const Expr &e, const Assumptions &assumptions)
{
    switch (e.kind()) {
    case Kind::Constant:
    case Kind::Parameter:
    case Kind::Variable:
        return e;
    case Kind::Sum: {
        std::vector<Expr> ops;
        ops.reserve(e.operands().size());
        for (const auto &c : e.operands()) {
            ops.push_back(simplify(c, assumptions));
        }
        return sum(std::move(ops), &assumptions);
    }
    case Kind::Product: {
        std::vector<Expr> ops;
        ops.reserve(e.operands().size());
        for (const auto &c : e.operands()) {
            ops.push_back(simplify(c, assumptions));
        }
        return product(std::move(ops), &assumptions);
    }
    case Kind::Power:
        return power(simplify(e.base(), assumptions), e.exponent(), &assumptions);
    default:
        return function(e.kind(), simplify(e.argument(), assumptions));
    }
}

Expr diff(const Expr &e, const std::string &var)
{
    if (!depends_on(e, var)) {
        return Expr::integer(0);
    }
    switch (e.kind()) {
    case Kind::Variable:
        return Expr::integer(1);
    case Kind::Sum: {
        std::vector<Expr> terms;
        for (const auto &t : e.operands()) {
            terms.push_back(diff(t, var));
        }
        return sum(std::move(terms));
    }
    case Kind::Product: {
        const auto &ops = e.operands();
        std::vector<Expr> terms;
        for (std::size_t i = 0; i < ops.size(); ++i) {
            Expr d = diff(ops[i], var);
            if (d.is_zero()) {
                continue;
            }
            std::vector<Expr> factors;
            factors.reserve(ops.size());
            for (std::size_t j = 0; j < ops.size(); ++j) {
                factors.push_back(j == i ? d : ops[j]);
            }
            terms.push_back(product(std::move(factors)));
        }
        return sum(std::move(terms));
    }
    case Kind::Power:
        return product({Expr::constant(e.exponent()), power(e.base(), e.exponent() - 1), diff(e.base(), var)});
    case Kind::Exp:
        return product({e, diff(e.argument(), var)});
    case Kind::Log:
        return product({diff(e.argument(), var), power(e.argument(), Rational(-1))});
    case Kind::Sin:
        return product({function(Kind::Cos, e.argument()), diff(e.argument(), var)});
    case Kind::Cos:
        return product({Expr::integer(-1), function(Kind::Sin, e.argument()), diff(e.argument(), var)});
    case Kind::Tan:
        return product({sum({Expr::integer(1), power(e, Rational(2))}), diff(e.argument(), var)});
    case Kind::Sinh:
        return product({function(Kind::Cosh, e.argument()), diff(e.argument(), var)});
    case Kind::Cosh:
        return product({function(Kind::Sinh, e.argument()), diff(e.argument(), var)});
    default:
        return Expr::integer(0);
    }
}

Expr substitute(const Expr &e, const std::map<std::string, Expr> &replacements)
{
    switch (e.kind()) {
    case Kind::Constant:
    case Kind::Parameter:
        return e;
    case Kind::Variable: {
        auto it = replacements.find(e.name());
        return it == replacements.end() ? e : it->second;
    }
    case Kind::Sum: {
        std::vector<Expr> ops;
        for (const auto &c : e.operands()) {
            ops.push_back(substitute(c, replacements));
        }
        return sum(std::move(ops));
    }
    case Kind::Product: {
        std::vector<Expr> ops;
        for (const auto &c : e.operands()) {
            ops.push_back(substitute(c, replacements));
        }
        return product(std::move(ops));
    }
    case Kind::Power:
        return power(substitute(e.base(), replacements), e.exponent());
    default:
        return function(e.kind(), substitute(e.argument(), replacements));
    }
}

// ---------------------------------------------------------------------------
// Printing

namespace {

void print(std::ostringstream &os, const Expr &e);

bool needs_parens_as_base(const Expr &b)
{
    switch (b.kind()) {
    case Kind::Constant:
        return b.value() < 0 || !is_integer(b.value());
    case Kind::Parameter:
    case Kind::Variable:
        return false;
    default:
        return !is_function(b.kind());
    }
}

void print_factor(std::ostringstream &os, const Expr &f)
{
    if (f.kind() == Kind::Sum) {
        os << '(';
        print(os, f);
        os << ')';
    } else {
        print(os, f);
    }
}

void print_product(std::ostringstream &os, const Expr &e)
{
    const auto &ops = e.operands();
    std::size_t start = 0;
    if (ops.front().is_constant()) {
        const Rational &c = ops.front().value();
        if (c == -1) {
            os << '-';
        } else {
            os << to_string(c) << '*';
        }
        start = 1;
    }
    for (std::size_t i = start; i < ops.size(); ++i) {
        if (i > start) {
            os << '*';
        }
        print_factor(os, ops[i]);
    }
}

void print(std::ostringstream &os, const Expr &e)
{
    switch (e.kind()) {
    case Kind::Constant:
        os << to_string(e.value());
        break;
    case Kind::Parameter:
    case Kind::Variable:
        os << e.name();
        break;
    case Kind::Sum: {
        bool first = true;
        for (const auto &t : e.operands()) {
            if (first) {
                print(os, t);
                first = false;
                continue;
            }
            if (is_negative_term(t)) {
                os << " - ";
                print(os, product({Expr::integer(-1), t}));
            } else {
                os << " + ";
                print(os, t);
            }
        }
        break;
    }
    case Kind::Product:
        print_product(os, e);
        break;
    case Kind::Power: {
        if (needs_parens_as_base(e.base())) {
            os << '(';
            print(os, e.base());
            os << ')';
        } else {
            print(os, e.base());
        }
        const Rational &r = e.exponent();
        if (is_integer(r) && r > 0) {
            os << '^' << to_string(r);
        } else {
            os << "^(" << to_string(r) << ')';
        }
        break;
    }
    default:
        os << function_name(e.kind()) << '(';
        print(os, e.argument());
        os << ')';
    }
}

} // namespace

std::string to_string(const Expr &e)
{
    std::ostringstream os;
    print(os, e);
    return os.str();
}

// ---------------------------------------------------------------------------
// Evaluation

double evaluate(const Expr &e, const Env &env)
{
    switch (e.kind()) {
    case Kind::Constant:
        return to_double(e.value());
    case Kind::Parameter:
    case Kind::Variable: {
        auto it = env.find(e.name());
        if (it == env.end()) {
            throw std::out_of_range("no value bound for symbol '" + e.name() + "'");
        }
        return it->second;
    }
    case Kind::Sum: {
        double s = 0;
        for (const auto &t : e.operands()) {
            s += evaluate(t, env);
        }
        return s;
    }
    case Kind::Product: {
        double p = 1;
        for (const auto &t : e.operands()) {
            p *= evaluate(t, env);
        }
        return p;
    }
    case Kind::Power: {
        const double b = evaluate(e.base(), env);
        const Rational &r = e.exponent();
        if (is_integer(r)) {
            if (b == 0 && r < 0) {
                throw DomainError("division by zero while evaluating " + to_string(e));
            }
            return std::pow(b, to_double(r));
        }
        if (b < 0 || (b == 0 && r < 0)) {
            throw DomainError("non-integer power of a non-positive value while evaluating " + to_string(e));
        }
        return std::pow(b, to_double(r));
    }
    case Kind::Exp:
        return std::exp(evaluate(e.argument(), env));
    case Kind::Log: {
        const double a = evaluate(e.argument(), env);
        if (!(a > 0)) {
            throw DomainError("log of a non-positive value while evaluating " + to_string(e));
        }
        return std::log(a);
    }
    case Kind::Sin:
        return std::sin(evaluate(e.argument(), env));
    case Kind::Cos:
        return std::cos(evaluate(e.argument(), env));
    case Kind::Tan:
        return std::tan(evaluate(e.argument(), env));
    case Kind::Sinh:
        return std::sinh(evaluate(e.argument(), env));
    case Kind::Cosh:
        return std::cosh(evaluate(e.argument(), env));
    }
    return 0;
}

} // namespace quadlift
