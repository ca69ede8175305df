#include <quadlift/errors.hpp>
#include <quadlift/polynomializer.hpp>

#include <algorithm>
#include <set>

namespace quadlift {

namespace {

// Conversion context over the original states, inputs and input derivatives.
ConversionContext original_context(const SystemAST &sys)
{
    ConversionContext ctx;
    const std::size_t n = sys.states.size();
    const std::size_t m = sys.inputs.size();
    ctx.nvars = n + 2 * m;
    for (std::size_t i = 0; i < n; ++i) {
        ctx.index.emplace(sys.states[i], i);
    }
    for (std::size_t j = 0; j < m; ++j) {
        ctx.index.emplace(sys.inputs[j], n + j);
        ctx.index.emplace(derivative_name(sys.inputs[j]), n + m + j);
    }
    return ctx;
}

std::optional<Polynomial> as_polynomial(const Expr &e, const ConversionContext &ctx)
{
    auto r = to_polynomial(e, ctx);
    if (auto *p = std::get_if<Polynomial>(&r)) {
        return *p;
    }
    return std::nullopt;
}

// Splits a polynomial argument into its parameter-only part and the rest.
std::pair<Expr, Expr> split_parameter_part(const Expr &arg)
{
    if (arg.kind() != Kind::Sum) {
        if (is_parameter_only(arg)) {
            return {arg, Expr::integer(0)};
        }
        return {Expr::integer(0), arg};
    }
    std::vector<Expr> params;
    std::vector<Expr> vars;
    for (const auto &t : arg.operands()) {
        (is_parameter_only(t) ? params : vars).push_back(t);
    }
    return {sum(std::move(params)), sum(std::move(vars))};
}

// Time derivative of an expression over the original variables.
Expr time_derivative(const Expr &f, const SystemAST &sys)
{
    std::vector<Expr> terms;
    for (std::size_t i = 0; i < sys.states.size(); ++i) {
        const std::string &x = sys.states[i];
        if (depends_on(f, x)) {
            terms.push_back(product({diff(f, x), sys.rhs(x)}));
        }
    }
    for (std::size_t j = 0; j < sys.inputs.size(); ++j) {
        const std::string &u = sys.inputs[j];
        if (depends_on(f, u)) {
            terms.push_back(product({diff(f, u), sys.input_derivative_symbol(j)}));
        }
    }
    return sum(std::move(terms));
}

struct Entry {
    std::string name;
    Expr definition;
    Expr symbol;
    Expr derivative;
    std::string provenance;
};

class Polynomializer {
public:
    Polynomializer(const SystemAST &sys, const PolynomializeOptions &options)
        : m_sys(sys), m_options(options), m_original(original_context(sys))
    {
        for (const auto &s : sys.states) {
            m_taken.insert(s);
        }
        for (const auto &u : sys.inputs) {
            m_taken.insert(u);
        }
        for (const auto &p : sys.parameters) {
            m_taken.insert(p);
        }
    }

    PolynomializeResult run()
    {
        std::vector<Polynomial> rows;
        while (true) {
            ConversionContext ctx = context();
            rows.clear();
            std::optional<Expr> failure;
            for (const auto &s : m_sys.states) {
                auto r = to_polynomial(m_sys.rhs(s), ctx);
                if (auto *bad = std::get_if<Expr>(&r)) {
                    failure = *bad;
                    break;
                }
                rows.push_back(std::get<Polynomial>(r));
            }
            for (std::size_t k = 0; !failure && k < m_entries.size(); ++k) {
                auto r = to_polynomial(m_entries[k].derivative, ctx);
                if (auto *bad = std::get_if<Expr>(&r)) {
                    failure = *bad;
                    break;
                }
                rows.push_back(std::get<Polynomial>(r));
            }
            if (!failure) {
                break;
            }
            introduce(*failure);
        }

        PolynomializeResult out;
        PolySystem &ps = out.system;
        ps.states = m_sys.states;
        ps.inputs = m_sys.inputs;
        ps.parameters = m_sys.parameters;
        ps.assumptions = m_sys.assumptions;
        for (const auto &e : m_entries) {
            ps.lifted.push_back(LiftedVar{e.name, e.definition, std::nullopt, e.provenance});
        }
        ps.rhs = std::move(rows);
        const ConversionContext ctx = context();
        for (const auto &rel : m_relations) {
            if (auto p = as_polynomial(rel, ctx)) {
                ps.relations.push_back(*p);
            }
        }
        out.lifting = ps.lifted;
        return out;
    }

private:
    ConversionContext context() const
    {
        ConversionContext ctx;
        const std::size_t n = m_sys.states.size();
        const std::size_t l = m_entries.size();
        const std::size_t m = m_sys.inputs.size();
        ctx.nvars = n + l + 2 * m;
        for (std::size_t i = 0; i < n; ++i) {
            ctx.index.emplace(m_sys.states[i], i);
        }
        for (std::size_t k = 0; k < l; ++k) {
            ctx.index.emplace(m_entries[k].name, n + k);
        }
        for (std::size_t j = 0; j < m; ++j) {
            ctx.index.emplace(m_sys.inputs[j], n + l + j);
            ctx.index.emplace(derivative_name(m_sys.inputs[j]), n + l + m + j);
        }
        ctx.hook = [this, nvars = ctx.nvars, n](const Expr &e) { return match(e, nvars, n); };
        return ctx;
    }

    Polynomial lifted_var(std::size_t nvars, std::size_t n, std::size_t k, int exponent = 1) const
    {
        return Polynomial::term(mono_var(nvars, n + k, exponent), Coefficient(Rational(1)));
    }

    // Recognizes subterms that are (powers of) lifted variables.
    std::optional<Polynomial> match(const Expr &e, std::size_t nvars, std::size_t n) const
    {
        if (e.kind() == Kind::Variable) {
            return std::nullopt;
        }
        for (std::size_t k = 0; k < m_entries.size(); ++k) {
            if (m_entries[k].definition == e) {
                return lifted_var(nvars, n, k);
            }
        }
        if (e.kind() == Kind::Exp && is_polynomial_in_variables(e.argument())) {
            return match_exp(e, nvars, n);
        }
        if (e.kind() == Kind::Power) {
            return match_power(e, nvars, n);
        }
        return std::nullopt;
    }

    std::optional<Polynomial> match_exp(const Expr &e, std::size_t nvars, std::size_t n) const
    {
        auto [param, var] = split_parameter_part(e.argument());
        auto v = as_polynomial(var, m_original);
        if (!v || v->is_zero()) {
            return std::nullopt;
        }
        for (std::size_t k = 0; k < m_entries.size(); ++k) {
            const Expr &d = m_entries[k].definition;
            if (d.kind() != Kind::Exp) {
                continue;
            }
            auto g = as_polynomial(d.argument(), m_original);
            if (!g || g->is_zero() || g->size() != v->size()) {
                continue;
            }
            const Coefficient &gl = g->terms().begin()->second;
            const Coefficient &vl = v->terms().begin()->second;
            if (!gl.is_monomial() || g->terms().begin()->first != v->terms().begin()->first) {
                continue;
            }
            const Coefficient ratio = vl * gl.inverse();
            if (!ratio.is_rational()) {
                continue;
            }
            const Rational q = ratio.rational();
            if (!is_integer(q) || q <= 0 || q > 64) {
                continue;
            }
            if (*g * Coefficient(q) != *v) {
                continue;
            }
            Polynomial out = lifted_var(nvars, n, k, to_int(q));
            if (!param.is_zero()) {
                out *= Coefficient::from_expr(function(Kind::Exp, param));
            }
            return out;
        }
        return std::nullopt;
    }

    std::optional<Polynomial> match_power(const Expr &e, std::size_t nvars, std::size_t n) const
    {
        const Expr &b = e.base();
        const Rational &r = e.exponent();
        std::optional<std::size_t> inverse;
        std::vector<std::pair<std::size_t, Rational>> powers;
        for (std::size_t k = 0; k < m_entries.size(); ++k) {
            const Expr &d = m_entries[k].definition;
            if (d.kind() == Kind::Power && d.base() == b) {
                if (d.exponent() == -1) {
                    inverse = k;
                } else if (!is_integer(d.exponent())) {
                    powers.emplace_back(k, d.exponent());
                }
            }
        }
        if (!inverse && powers.empty()) {
            return std::nullopt;
        }
        if (is_integer(r) && r < 0 && inverse) {
            return lifted_var(nvars, n, *inverse, -to_int(r));
        }
        std::optional<Polynomial> base_poly;
        auto base = [&]() -> std::optional<Polynomial> {
            if (!base_poly) {
                ConversionContext ctx = context();
                base_poly = as_polynomial(b, ctx);
            }
            return base_poly;
        };
        for (const auto &[k, s] : powers) {
            for (int mult = 1; mult <= 16; ++mult) {
                const Rational d = r - Rational(mult) * s;
                if (!is_integer(d)) {
                    continue;
                }
                const int di = to_int(d);
                Polynomial out = lifted_var(nvars, n, k, mult);
                if (di > 0) {
                    auto bp = base();
                    if (!bp) {
                        return std::nullopt;
                    }
                    out *= bp->pow(static_cast<unsigned>(di));
                } else if (di < 0) {
                    if (!inverse) {
                        continue;
                    }
                    out *= lifted_var(nvars, n, *inverse, -di);
                }
                return out;
            }
        }
        return std::nullopt;
    }

    std::string fresh_name()
    {
        while (true) {
            std::string candidate = m_options.prefix + std::to_string(++m_counter);
            if (m_taken.insert(candidate).second) {
                return candidate;
            }
        }
    }

    std::optional<std::size_t> find(const Expr &definition) const
    {
        for (std::size_t k = 0; k < m_entries.size(); ++k) {
            if (m_entries[k].definition == definition) {
                return k;
            }
        }
        return std::nullopt;
    }

    // Adds an entry whose derivative is filled in by the caller.
    std::size_t add(const Expr &definition, const std::string &provenance)
    {
        if (auto k = find(definition)) {
            return *k;
        }
        if (m_entries.size() >= m_options.max_new_variables) {
            throw PolynomializationError(PolynomializationError::Kind::TooManyVariables,
                                         "polynomialization exceeded the cap of " +
                                             std::to_string(m_options.max_new_variables) + " new variables");
        }
        Entry e;
        e.name = fresh_name();
        e.definition = definition;
        e.symbol = Expr::variable(e.name, kLiftedRankBase + static_cast<int>(m_entries.size()));
        e.provenance = provenance;
        m_entries.push_back(std::move(e));
        return m_entries.size() - 1;
    }

    std::size_t add_inverse(const Expr &f)
    {
        const Expr def = power(f, Rational(-1));
        if (auto k = find(def)) {
            return *k;
        }
        const std::size_t k = add(def, "inverse of " + to_string(f) + "; singular where " + to_string(f) + " = 0");
        const Expr v = m_entries[k].symbol;
        m_entries[k].derivative = product({Expr::integer(-1), power(v, Rational(2)), time_derivative(f, m_sys)});
        m_relations.push_back(product({v, f}) - Expr::integer(1));
        return k;
    }

    void introduce(const Expr &t)
    {
        for (const auto &entry : m_entries) {
            if (depends_on(t, entry.name)) {
                throw std::logic_error("polynomializer: nonpolynomial subterm mentions a lifted variable");
            }
        }
        switch (t.kind()) {
        case Kind::Exp: {
            Expr def = t;
            if (is_polynomial_in_variables(t.argument())) {
                def = function(Kind::Exp, split_parameter_part(t.argument()).second);
            }
            if (find(def)) {
                throw std::logic_error("polynomializer: failed to match an existing exponential " + to_string(def));
            }
            const std::size_t k = add(def, "exp rule");
            m_entries[k].derivative = product({m_entries[k].symbol, time_derivative(def.argument(), m_sys)});
            return;
        }
        case Kind::Log: {
            const Expr &f = t.argument();
            const std::size_t v = add_inverse(f);
            const std::size_t k = add(t, "log rule; singular where " + to_string(f) + " <= 0");
            m_entries[k].derivative = product({m_entries[v].symbol, time_derivative(f, m_sys)});
            return;
        }
        case Kind::Sin:
        case Kind::Cos:
        case Kind::Sinh:
        case Kind::Cosh: {
            const bool trig = t.kind() == Kind::Sin || t.kind() == Kind::Cos;
            const Expr &f = t.argument();
            const Expr sdef = function(trig ? Kind::Sin : Kind::Sinh, f);
            const Expr cdef = function(trig ? Kind::Cos : Kind::Cosh, f);
            const char *tag = trig ? "sin/cos pair" : "sinh/cosh pair";
            const std::size_t s = add(sdef, tag);
            const std::size_t c = add(cdef, tag);
            const Expr fd = time_derivative(f, m_sys);
            const Expr ss = m_entries[s].symbol;
            const Expr cs = m_entries[c].symbol;
            m_entries[s].derivative = product({cs, fd});
            m_entries[c].derivative = trig ? product({Expr::integer(-1), ss, fd}) : product({ss, fd});
            const Expr s2 = power(ss, Rational(2));
            const Expr c2 = power(cs, Rational(2));
            m_relations.push_back(trig ? s2 + c2 - Expr::integer(1) : c2 - s2 - Expr::integer(1));
            return;
        }
        case Kind::Tan: {
            const std::size_t k = add(t, "tan rule; singular where cos(" + to_string(t.argument()) + ") = 0");
            const Expr w = m_entries[k].symbol;
            m_entries[k].derivative =
                product({sum({Expr::integer(1), power(w, Rational(2))}), time_derivative(t.argument(), m_sys)});
            return;
        }
        case Kind::Power: {
            const Expr &b = t.base();
            const Rational &r = t.exponent();
            if (is_integer(r)) {
                add_inverse(b);
                return;
            }
            if (!m_options.power_rule) {
                throw PolynomializationError(PolynomializationError::Kind::NonIntegerResidualExponent,
                                             "cannot polynomialize " + to_string(t) +
                                                 ": non-integer exponent and the power rule is disabled");
            }
            const std::size_t k = add(t, "power rule " + to_string(r) + "; singular where " + to_string(b) + " = 0");
            const std::size_t v = add_inverse(b);
            const Expr w = m_entries[k].symbol;
            m_entries[k].derivative =
                product({Expr::constant(r), w, m_entries[v].symbol, time_derivative(b, m_sys)});
            return;
        }
        default:
            throw PolynomializationError(PolynomializationError::Kind::UnsupportedFunction,
                                         "unsupported subterm " + to_string(t) +
                                             "; only exp, log, sin, cos, tan, sinh, cosh and rational powers can "
                                             "be lifted (user-defined functions such as Bessel are not supported)");
        }
    }

    const SystemAST &m_sys;
    PolynomializeOptions m_options;
    ConversionContext m_original;
    std::vector<Entry> m_entries;
    std::vector<Expr> m_relations;
    std::set<std::string> m_taken;
    int m_counter = 0;
};

// Exp nodes with polynomial arguments, in traversal order.
void collect_exps(const Expr &e, std::vector<Expr> &out)
{
    if (e.kind() == Kind::Exp && is_polynomial_in_variables(e.argument()) && !is_parameter_only(e)) {
        if (std::find(out.begin(), out.end(), e) == out.end()) {
            out.push_back(e);
        }
    }
    if (e.kind() == Kind::Constant || e.kind() == Kind::Parameter || e.kind() == Kind::Variable) {
        return;
    }
    for (const auto &c : e.operands()) {
        collect_exps(c, out);
    }
}

Expr replace(const Expr &e, const std::map<Expr, Expr, ExprLess> &table)
{
    if (auto it = table.find(e); it != table.end()) {
        return it->second;
    }
    switch (e.kind()) {
    case Kind::Constant:
    case Kind::Parameter:
    case Kind::Variable:
        return e;
    case Kind::Sum: {
        std::vector<Expr> ops;
        for (const auto &c : e.operands()) {
            ops.push_back(replace(c, table));
        }
        return sum(std::move(ops));
    }
    case Kind::Product: {
        std::vector<Expr> ops;
        for (const auto &c : e.operands()) {
            ops.push_back(replace(c, table));
        }
        return product(std::move(ops));
    }
    case Kind::Power:
        return power(replace(e.base(), table), e.exponent());
    default:
        return function(e.kind(), replace(e.argument(), table));
    }
}

} // namespace

PolynomializeResult polynomialize(const SystemAST &system, const PolynomializeOptions &options)
{
    Polynomializer p(system, options);
    return p.run();
}

SystemAST exp_gcd_heuristic(const SystemAST &system)
{
    std::vector<Expr> exps;
    for (const auto &s : system.states) {
        collect_exps(system.rhs(s), exps);
    }
    const ConversionContext ctx = original_context(system);

    struct Member {
        Expr node;
        Expr param;
        Rational c;
    };
    // Family key: normalized variable part L and the sign of its multiplier.
    std::map<std::pair<std::string, int>, std::pair<Polynomial, std::vector<Member>>> families;
    for (const auto &e : exps) {
        auto [param, var] = split_parameter_part(e.argument());
        auto v = as_polynomial(var, ctx);
        if (!v || v->is_zero()) {
            continue;
        }
        const Coefficient &lead = v->terms().begin()->second;
        if (!lead.is_monomial()) {
            continue;
        }
        const Rational c = lead.terms().begin()->second;
        Polynomial l = *v * Coefficient(Rational(1) / c);
        std::vector<std::string> names(ctx.nvars);
        for (const auto &[name, idx] : ctx.index) {
            names[idx] = name;
        }
        const auto key = std::make_pair(l.to_string(names), c > 0 ? 1 : -1);
        auto &fam = families[key];
        fam.first = l;
        fam.second.push_back(Member{e, param, c});
    }

    std::map<Expr, Expr, ExprLess> table;
    for (auto &[key, fam] : families) {
        auto &members = fam.second;
        Rational g(0);
        for (const auto &m : members) {
            g = gcd(g, m.c);
        }
        if (key.second < 0) {
            g = -g;
        }
        std::set<Rational> distinct;
        for (const auto &m : members) {
            distinct.insert(m.c);
        }
        if (distinct.size() < 2 && members.front().c == g) {
            continue;
        }
        std::vector<Expr> symbols(ctx.nvars);
        for (std::size_t i = 0; i < system.states.size(); ++i) {
            symbols[i] = system.state_symbol(i);
        }
        for (std::size_t j = 0; j < system.inputs.size(); ++j) {
            symbols[system.states.size() + j] = system.input_symbol(j);
            symbols[system.states.size() + system.inputs.size() + j] = system.input_derivative_symbol(j);
        }
        const Expr generator = function(Kind::Exp, (fam.first * Coefficient(g)).to_expr(symbols));
        for (const auto &m : members) {
            Expr rewritten = Expr::raw_power(generator, m.c / g);
            if (m.c == g) {
                rewritten = generator;
            }
            if (!m.param.is_zero()) {
                rewritten = Expr::raw_product({function(Kind::Exp, m.param), rewritten});
            }
            table.emplace(m.node, rewritten);
        }
    }
    if (table.empty()) {
        return system;
    }
    SystemAST out = system;
    for (auto &[name, rhs] : out.equations) {
        rhs = replace(rhs, table);
    }
    return out;
}

bool verify_polynomial(const PolySystem &system)
{
    if (system.rhs.size() != system.dynamic_count()) {
        return false;
    }
    for (const auto &p : system.rhs) {
        if (p.nvars() != system.nvars() && !p.is_zero()) {
            return false;
        }
        for (const auto &[m, c] : p.terms()) {
            if (m.size() != system.nvars() || mono_has_negative(m)) {
                return false;
            }
        }
    }
    return true;
}

bool verify_polynomial(const SystemAST &system)
{
    const ConversionContext ctx = original_context(system);
    for (const auto &s : system.states) {
        if (!as_polynomial(system.rhs(s), ctx)) {
            return false;
        }
    }
    return true;
}

PolySystem to_poly_system(const SystemAST &system)
{
    PolySystem ps;
    ps.states = system.states;
    ps.inputs = system.inputs;
    ps.parameters = system.parameters;
    ps.assumptions = system.assumptions;
    const ConversionContext ctx = original_context(system);
    for (const auto &s : system.states) {
        auto r = to_polynomial(system.rhs(s), ctx);
        if (auto *bad = std::get_if<Expr>(&r)) {
            throw PolynomializationError(PolynomializationError::Kind::UnsupportedFunction,
                                         "equation for " + s + " is not polynomial: " + to_string(*bad));
        }
        ps.rhs.push_back(std::get<Polynomial>(r));
    }
    return ps;
}

} // namespace quadlift
