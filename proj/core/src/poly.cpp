#include <quadlift/errors.hpp>
#include <quadlift/parser.hpp>
#include <quadlift/poly.hpp>

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace quadlift {

// ---------------------------------------------------------------------------
// Monomials

Monomial mono_one(std::size_t nvars)
{
    return Monomial(nvars, 0);
}

Monomial mono_var(std::size_t nvars, std::size_t index, int exponent)
{
    Monomial m(nvars, 0);
    m.at(index) = exponent;
    return m;
}

Monomial mono_mul(const Monomial &a, const Monomial &b)
{
    if (a.size() != b.size()) {
        throw std::invalid_argument("mono_mul: monomials over different variable lists");
    }
    Monomial out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = a[i] + b[i];
    }
    return out;
}

std::optional<Monomial> mono_div(const Monomial &a, const Monomial &b, bool laurent)
{
    if (a.size() != b.size()) {
        throw std::invalid_argument("mono_div: monomials over different variable lists");
    }
    Monomial out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = a[i] - b[i];
        if (!laurent && out[i] < 0) {
            return std::nullopt;
        }
    }
    return out;
}

bool mono_divides(const Monomial &a, const Monomial &b)
{
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) {
            return false;
        }
    }
    return true;
}

int mono_degree(const Monomial &m)
{
    return std::accumulate(m.begin(), m.end(), 0);
}

bool mono_is_one(const Monomial &m)
{
    return std::all_of(m.begin(), m.end(), [](int e) { return e == 0; });
}

bool mono_has_negative(const Monomial &m)
{
    return std::any_of(m.begin(), m.end(), [](int e) { return e < 0; });
}

bool GrlexGreater::operator()(const Monomial &a, const Monomial &b) const
{
    const int da = mono_degree(a);
    const int db = mono_degree(b);
    if (da != db) {
        return da > db;
    }
    return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

std::size_t MonomialHash::operator()(const Monomial &m) const noexcept
{
    std::size_t h = m.size();
    for (int e : m) {
        h ^= static_cast<std::size_t>(e + 0x9e37) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
}

// ---------------------------------------------------------------------------
// Coefficients

bool AtomPowersLess::operator()(const AtomPowers &a, const AtomPowers &b) const
{
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (int c = compare(a[i].first, b[i].first); c != 0) {
            return c < 0;
        }
        if (a[i].second != b[i].second) {
            return a[i].second < b[i].second;
        }
    }
    return a.size() < b.size();
}

namespace {

AtomPowers multiply_atoms(const AtomPowers &a, const AtomPowers &b)
{
    AtomPowers out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && compare(a[i].first, b[j].first) < 0)) {
            out.push_back(a[i++]);
        } else if (i == a.size() || compare(b[j].first, a[i].first) < 0) {
            out.push_back(b[j++]);
        } else {
            const int e = a[i].second + b[j].second;
            if (e != 0) {
                out.emplace_back(a[i].first, e);
            }
            ++i;
            ++j;
        }
    }
    return out;
}

void accumulate_term(Coefficient::Terms &terms, const AtomPowers &key, const Rational &q)
{
    if (q == 0) {
        return;
    }
    auto [it, inserted] = terms.emplace(key, q);
    if (!inserted) {
        it->second += q;
        if (it->second == 0) {
            terms.erase(it);
        }
    }
}

} // namespace

Coefficient::Coefficient(Rational q)
{
    q.canonicalize();
    if (q != 0) {
        m_terms.emplace(AtomPowers{}, std::move(q));
    }
}

Coefficient Coefficient::atom(const Expr &a, int exponent)
{
    Coefficient c;
    if (exponent == 0) {
        return Coefficient(Rational(1));
    }
    c.m_terms.emplace(AtomPowers{{a, exponent}}, Rational(1));
    return c;
}

Coefficient Coefficient::from_expr(const Expr &e)
{
    switch (e.kind()) {
    case Kind::Constant:
        return Coefficient(e.value());
    case Kind::Parameter:
        return atom(e);
    case Kind::Sum: {
        Coefficient c;
        for (const auto &t : e.operands()) {
            c += from_expr(t);
        }
        return c;
    }
    case Kind::Product: {
        Coefficient c(Rational(1));
        for (const auto &t : e.operands()) {
            c *= from_expr(t);
        }
        return c;
    }
    case Kind::Power: {
        const Rational &r = e.exponent();
        if (!is_integer(r)) {
            return atom(e);
        }
        const int n = to_int(r);
        Coefficient b = from_expr(e.base());
        if (n < 0) {
            if (!b.is_monomial()) {
                return atom(e.base(), n);
            }
            b = b.inverse();
        }
        Coefficient out(Rational(1));
        for (int i = 0; i < std::abs(n); ++i) {
            out *= b;
        }
        return out;
    }
    default:
        return atom(e);
    }
}

bool Coefficient::is_rational() const
{
    return m_terms.empty() || (m_terms.size() == 1 && m_terms.begin()->first.empty());
}

Rational Coefficient::rational() const
{
    if (m_terms.empty()) {
        return Rational(0);
    }
    assert(is_rational());
    return m_terms.begin()->second;
}

Coefficient Coefficient::inverse() const
{
    if (!is_monomial()) {
        throw std::domain_error("inverse of a non-monomial coefficient");
    }
    const auto &[atoms, q] = *m_terms.begin();
    AtomPowers inv = atoms;
    for (auto &a : inv) {
        a.second = -a.second;
    }
    Coefficient c;
    c.m_terms.emplace(std::move(inv), Rational(1) / q);
    return c;
}

Coefficient Coefficient::operator-() const
{
    Coefficient c = *this;
    for (auto &kv : c.m_terms) {
        kv.second = -kv.second;
    }
    return c;
}

Coefficient &Coefficient::operator+=(const Coefficient &o)
{
    for (const auto &[k, q] : o.m_terms) {
        accumulate_term(m_terms, k, q);
    }
    return *this;
}

Coefficient &Coefficient::operator-=(const Coefficient &o)
{
    for (const auto &[k, q] : o.m_terms) {
        accumulate_term(m_terms, k, -q);
    }
    return *this;
}

Coefficient &Coefficient::operator*=(const Coefficient &o)
{
    if (o.is_rational()) {
        const Rational q = o.rational();
        if (q == 0) {
            m_terms.clear();
        } else if (q != 1) {
            for (auto &kv : m_terms) {
                kv.second *= q;
            }
        }
        return *this;
    }
    Terms out;
    for (const auto &[ka, qa] : m_terms) {
        for (const auto &[kb, qb] : o.m_terms) {
            accumulate_term(out, multiply_atoms(ka, kb), qa * qb);
        }
    }
    m_terms = std::move(out);
    return *this;
}

bool operator==(const Coefficient &a, const Coefficient &b)
{
    if (a.m_terms.size() != b.m_terms.size()) {
        return false;
    }
    auto i = a.m_terms.begin();
    auto j = b.m_terms.begin();
    for (; i != a.m_terms.end(); ++i, ++j) {
        if (AtomPowersLess{}(i->first, j->first) || AtomPowersLess{}(j->first, i->first) || i->second != j->second) {
            return false;
        }
    }
    return true;
}

double Coefficient::evaluate(const Env &params) const
{
    double s = 0;
    for (const auto &[atoms, q] : m_terms) {
        double t = to_double(q);
        for (const auto &[a, e] : atoms) {
            t *= std::pow(quadlift::evaluate(a, params), e);
        }
        s += t;
    }
    return s;
}

Expr Coefficient::to_expr() const
{
    std::vector<Expr> terms;
    for (const auto &[atoms, q] : m_terms) {
        std::vector<Expr> factors{Expr::constant(q)};
        for (const auto &[a, e] : atoms) {
            factors.push_back(power(a, Rational(e)));
        }
        terms.push_back(product(std::move(factors)));
    }
    return sum(std::move(terms));
}

namespace {

std::string render_atom_power(const Expr &a, int e)
{
    std::string base = to_string(a);
    if (a.kind() == Kind::Power || a.kind() == Kind::Sum || a.kind() == Kind::Product) {
        base = "(" + base + ")";
    }
    if (e == 1) {
        return base;
    }
    if (e > 0) {
        return base + "^" + std::to_string(e);
    }
    return base + "^(" + std::to_string(e) + ")";
}

// Renders q * atoms with a leading '-' for negative q.
std::string render_coefficient_term(const AtomPowers &atoms, const Rational &q)
{
    std::string a;
    for (const auto &[atom, e] : atoms) {
        if (!a.empty()) {
            a += "*";
        }
        a += render_atom_power(atom, e);
    }
    if (a.empty()) {
        return to_string(q);
    }
    if (q == 1) {
        return a;
    }
    if (q == -1) {
        return "-" + a;
    }
    return to_string(q) + "*" + a;
}

// Joins signed pieces with " + " / " - ".
std::string join_signed(const std::vector<std::string> &pieces)
{
    std::string out;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        const std::string &p = pieces[i];
        if (i == 0) {
            out = p;
        } else if (!p.empty() && p[0] == '-') {
            out += " - " + p.substr(1);
        } else {
            out += " + " + p;
        }
    }
    return out;
}

} // namespace

std::string Coefficient::to_string() const
{
    if (m_terms.empty()) {
        return "0";
    }
    std::vector<std::string> pieces;
    for (const auto &[atoms, q] : m_terms) {
        pieces.push_back(render_coefficient_term(atoms, q));
    }
    return join_signed(pieces);
}

// ---------------------------------------------------------------------------
// Polynomials

Polynomial Polynomial::constant(std::size_t nvars, const Coefficient &c)
{
    Polynomial p(nvars);
    p.add_term(mono_one(nvars), c);
    return p;
}

Polynomial Polynomial::variable(std::size_t nvars, std::size_t index)
{
    Polynomial p(nvars);
    p.add_term(mono_var(nvars, index), Coefficient(Rational(1)));
    return p;
}

Polynomial Polynomial::term(const Monomial &m, const Coefficient &c)
{
    Polynomial p(m.size());
    p.add_term(m, c);
    return p;
}

void Polynomial::add_term(const Monomial &m, const Coefficient &c)
{
    assert(m.size() == m_nvars);
    if (c.is_zero()) {
        return;
    }
    auto [it, inserted] = m_terms.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) {
            m_terms.erase(it);
        }
    }
}

Polynomial Polynomial::operator-() const
{
    Polynomial p(m_nvars);
    for (const auto &[m, c] : m_terms) {
        p.m_terms.emplace(m, -c);
    }
    return p;
}

Polynomial &Polynomial::operator+=(const Polynomial &o)
{
    if (m_nvars == 0 && m_terms.empty()) {
        m_nvars = o.m_nvars;
    }
    for (const auto &[m, c] : o.m_terms) {
        add_term(m, c);
    }
    return *this;
}

Polynomial &Polynomial::operator-=(const Polynomial &o)
{
    if (m_nvars == 0 && m_terms.empty()) {
        m_nvars = o.m_nvars;
    }
    for (const auto &[m, c] : o.m_terms) {
        add_term(m, -c);
    }
    return *this;
}

Polynomial operator*(const Polynomial &a, const Polynomial &b)
{
    Polynomial out(std::max(a.m_nvars, b.m_nvars));
    for (const auto &[ma, ca] : a.m_terms) {
        for (const auto &[mb, cb] : b.m_terms) {
            out.add_term(mono_mul(ma, mb), ca * cb);
        }
    }
    return out;
}

Polynomial &Polynomial::operator*=(const Polynomial &o)
{
    *this = *this * o;
    return *this;
}

Polynomial &Polynomial::operator*=(const Coefficient &c)
{
    if (c.is_zero()) {
        m_terms.clear();
        return *this;
    }
    for (auto it = m_terms.begin(); it != m_terms.end();) {
        it->second *= c;
        if (it->second.is_zero()) {
            it = m_terms.erase(it);
        } else {
            ++it;
        }
    }
    return *this;
}

bool operator==(const Polynomial &a, const Polynomial &b)
{
    if (a.m_terms.size() != b.m_terms.size()) {
        return false;
    }
    auto i = a.m_terms.begin();
    auto j = b.m_terms.begin();
    for (; i != a.m_terms.end(); ++i, ++j) {
        if (i->first != j->first || i->second != j->second) {
            return false;
        }
    }
    return true;
}

Polynomial Polynomial::pow(unsigned n) const
{
    Polynomial out = constant(m_nvars, Coefficient(Rational(1)));
    Polynomial base = *this;
    while (n > 0) {
        if (n & 1U) {
            out *= base;
        }
        n >>= 1U;
        if (n > 0) {
            base *= base;
        }
    }
    return out;
}

Polynomial Polynomial::partial_derivative(std::size_t var) const
{
    Polynomial out(m_nvars);
    for (const auto &[m, c] : m_terms) {
        const int e = m.at(var);
        if (e == 0) {
            continue;
        }
        Monomial d = m;
        d[var] -= 1;
        out.add_term(d, c * Coefficient(Rational(e)));
    }
    return out;
}

Polynomial Polynomial::substitute(std::size_t var, const Polynomial &value) const
{
    Polynomial out(m_nvars);
    for (const auto &[m, c] : m_terms) {
        const int e = m.at(var);
        if (e < 0) {
            throw std::invalid_argument("substitute: negative exponent on the substituted variable");
        }
        Monomial rest = m;
        rest[var] = 0;
        Polynomial t = term(rest, c);
        if (e > 0) {
            t *= value.pow(static_cast<unsigned>(e));
        }
        out += t;
    }
    return out;
}

Polynomial Polynomial::embed(std::size_t nvars, const std::vector<std::size_t> &map) const
{
    Polynomial out(nvars);
    for (const auto &[m, c] : m_terms) {
        Monomial e(nvars, 0);
        for (std::size_t i = 0; i < m.size(); ++i) {
            e.at(map.at(i)) += m[i];
        }
        out.add_term(e, c);
    }
    return out;
}

Polynomial::Degrees Polynomial::degrees() const
{
    Degrees d;
    d.per_variable.assign(m_nvars, 0);
    if (m_terms.empty()) {
        d.total = -1;
        return d;
    }
    bool first = true;
    for (const auto &[m, c] : m_terms) {
        for (std::size_t i = 0; i < m_nvars; ++i) {
            d.per_variable[i] = first ? m[i] : std::max(d.per_variable[i], m[i]);
        }
        first = false;
        d.total = std::max(d.total, mono_degree(m));
    }
    return d;
}

double Polynomial::evaluate(const std::vector<double> &point, const Env &params) const
{
    double s = 0;
    for (const auto &[m, c] : m_terms) {
        double t = c.evaluate(params);
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] != 0) {
                t *= std::pow(point.at(i), m[i]);
            }
        }
        s += t;
    }
    return s;
}

Expr Polynomial::to_expr(const std::vector<Expr> &symbols) const
{
    std::vector<Expr> terms;
    for (const auto &[m, c] : m_terms) {
        std::vector<Expr> factors{c.to_expr()};
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] != 0) {
                factors.push_back(power(symbols.at(i), Rational(m[i])));
            }
        }
        terms.push_back(product(std::move(factors)));
    }
    return sum(std::move(terms));
}

std::string Polynomial::to_string(const std::vector<std::string> &names) const
{
    if (m_terms.empty()) {
        return "0";
    }
    std::vector<std::string> pieces;
    for (const auto &[m, c] : m_terms) {
        std::string mono;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0) {
                continue;
            }
            if (!mono.empty()) {
                mono += "*";
            }
            mono += names.at(i);
            if (m[i] < 0) {
                mono += "^(" + std::to_string(m[i]) + ")";
            } else if (m[i] > 1) {
                mono += "^" + std::to_string(m[i]);
            }
        }
        std::string coef;
        if (c.terms().size() == 1) {
            coef = render_coefficient_term(c.terms().begin()->first, c.terms().begin()->second);
        } else {
            coef = "(" + c.to_string() + ")";
        }
        if (mono.empty()) {
            pieces.push_back(coef);
        } else if (coef == "1") {
            pieces.push_back(mono);
        } else if (coef == "-1") {
            pieces.push_back("-" + mono);
        } else {
            pieces.push_back(coef + "*" + mono);
        }
    }
    return join_signed(pieces);
}

// ---------------------------------------------------------------------------
// Systems

VarRole PolySystem::role(std::size_t index) const
{
    if (index < states.size()) {
        return VarRole::State;
    }
    if (index < dynamic_count()) {
        return VarRole::Lifted;
    }
    if (index < dynamic_count() + inputs.size()) {
        return VarRole::Input;
    }
    if (index < nvars()) {
        return VarRole::InputDerivative;
    }
    throw std::out_of_range("variable index out of range");
}

std::string PolySystem::name(std::size_t index) const
{
    switch (role(index)) {
    case VarRole::State:
        return states[index];
    case VarRole::Lifted:
        return lifted[index - states.size()].name;
    case VarRole::Input:
        return inputs[index - dynamic_count()];
    default:
        return derivative_name(inputs[index - dynamic_count() - inputs.size()]);
    }
}

std::vector<std::string> PolySystem::names() const
{
    std::vector<std::string> out;
    out.reserve(nvars());
    for (std::size_t i = 0; i < nvars(); ++i) {
        out.push_back(name(i));
    }
    return out;
}

std::optional<std::size_t> PolySystem::index_of(const std::string &n) const
{
    for (std::size_t i = 0; i < nvars(); ++i) {
        if (name(i) == n) {
            return i;
        }
    }
    return std::nullopt;
}

Expr PolySystem::symbol(std::size_t index) const
{
    switch (role(index)) {
    case VarRole::State:
        return Expr::variable(states[index], static_cast<int>(index));
    case VarRole::Lifted:
        return Expr::variable(name(index), kLiftedRankBase + static_cast<int>(index - states.size()));
    case VarRole::Input: {
        const std::size_t j = index - dynamic_count();
        return Expr::variable(inputs[j], static_cast<int>(states.size() + j));
    }
    default: {
        const std::size_t j = index - dynamic_count() - inputs.size();
        return Expr::variable(derivative_name(inputs[j]), kInputDerivativeRankBase + static_cast<int>(j));
    }
    }
}

std::vector<Expr> PolySystem::symbols() const
{
    std::vector<Expr> out;
    out.reserve(nvars());
    for (std::size_t i = 0; i < nvars(); ++i) {
        out.push_back(symbol(i));
    }
    return out;
}

Expr PolySystem::definition(std::size_t index) const
{
    if (role(index) == VarRole::Lifted) {
        return lifted[index - states.size()].definition;
    }
    return symbol(index);
}

std::string PolySystem::render() const
{
    std::ostringstream os;
    const auto n = names();
    for (std::size_t i = 0; i < dynamic_count(); ++i) {
        os << n[i] << "' = " << rhs.at(i).to_string(n) << '\n';
    }
    return os.str();
}

Polynomial lie_derivative(const Monomial &m, const PolySystem &sys)
{
    const std::size_t nv = sys.nvars();
    if (m.size() != nv) {
        throw std::invalid_argument("lie_derivative: monomial does not match the system's variables");
    }
    Polynomial out(nv);
    for (std::size_t j = 0; j < sys.inputs.size(); ++j) {
        if (m[sys.input_derivative_index(j)] != 0) {
            throw MissingRhsError("no derivative available for symbol '" + sys.name(sys.input_derivative_index(j)) +
                                  "'");
        }
    }
    for (std::size_t i = 0; i < sys.dynamic_count(); ++i) {
        const int e = m[i];
        if (e == 0) {
            continue;
        }
        Monomial d = m;
        d[i] -= 1;
        Polynomial t = Polynomial::term(d, Coefficient(Rational(e)));
        out += t * sys.rhs.at(i);
    }
    for (std::size_t j = 0; j < sys.inputs.size(); ++j) {
        const std::size_t u = sys.input_index(j);
        const int e = m[u];
        if (e == 0) {
            continue;
        }
        Monomial d = m;
        d[u] -= 1;
        d[sys.input_derivative_index(j)] += 1;
        out.add_term(d, Coefficient(Rational(e)));
    }
    return out;
}

Polynomial lie_derivative(const Polynomial &p, const PolySystem &sys)
{
    Polynomial out(sys.nvars());
    for (const auto &[m, c] : p.terms()) {
        out += lie_derivative(m, sys) * c;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Expression conversion

namespace {

ConversionResult convert(const Expr &e, const ConversionContext &ctx)
{
    if (is_parameter_only(e)) {
        return Polynomial::constant(ctx.nvars, Coefficient::from_expr(e));
    }
    if (ctx.hook) {
        if (auto hit = ctx.hook(e)) {
            return *hit;
        }
    }
    switch (e.kind()) {
    case Kind::Variable: {
        auto it = ctx.index.find(e.name());
        if (it == ctx.index.end()) {
            return e;
        }
        return Polynomial::variable(ctx.nvars, it->second);
    }
    case Kind::Sum: {
        Polynomial acc(ctx.nvars);
        for (const auto &t : e.operands()) {
            auto r = convert(t, ctx);
            if (auto *bad = std::get_if<Expr>(&r)) {
                return *bad;
            }
            acc += std::get<Polynomial>(r);
        }
        return acc;
    }
    case Kind::Product: {
        Polynomial acc = Polynomial::constant(ctx.nvars, Coefficient(Rational(1)));
        for (const auto &t : e.operands()) {
            auto r = convert(t, ctx);
            if (auto *bad = std::get_if<Expr>(&r)) {
                return *bad;
            }
            acc *= std::get<Polynomial>(r);
        }
        return acc;
    }
    case Kind::Power: {
        auto r = convert(e.base(), ctx);
        if (auto *bad = std::get_if<Expr>(&r)) {
            return *bad;
        }
        const Rational &q = e.exponent();
        if (!is_integer(q)) {
            return e;
        }
        const int n = to_int(q);
        const Polynomial &b = std::get<Polynomial>(r);
        if (n > 0) {
            return b.pow(static_cast<unsigned>(n));
        }
        if (ctx.laurent && b.size() == 1 && b.terms().begin()->second.is_monomial()) {
            const auto &[m, c] = *b.terms().begin();
            Monomial inv = m;
            for (auto &x : inv) {
                x = -x;
            }
            return Polynomial::term(inv, c.inverse()).pow(static_cast<unsigned>(-n));
        }
        return e;
    }
    default: {
        auto r = convert(e.argument(), ctx);
        if (auto *bad = std::get_if<Expr>(&r)) {
            return *bad;
        }
        return e;
    }
    }
}

} // namespace

ConversionResult to_polynomial(const Expr &e, const ConversionContext &ctx)
{
    return convert(e, ctx);
}

ConversionContext conversion_context(const PolySystem &sys, bool laurent)
{
    ConversionContext ctx;
    ctx.nvars = sys.nvars();
    ctx.laurent = laurent;
    for (std::size_t i = 0; i < sys.nvars(); ++i) {
        ctx.index.emplace(sys.name(i), i);
    }
    return ctx;
}

} // namespace quadlift
