#include "quad_internal.hpp"

#include <quadlift/errors.hpp>
#include <quadlift/normal_form.hpp>

#include <algorithm>
#include <set>
#include <tuple>

namespace quadlift {

std::string render_monomial(const Monomial &m, const std::vector<std::string> &names)
{
    std::string out;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] == 0) {
            continue;
        }
        if (!out.empty()) {
            out += "*";
        }
        out += names.at(i);
        if (m[i] < 0) {
            out += "^(" + std::to_string(m[i]) + ")";
        } else if (m[i] > 1) {
            out += "^" + std::to_string(m[i]);
        }
    }
    return out.empty() ? "1" : out;
}

namespace detail {

GeneratorSpace::GeneratorSpace(const PolySystem &sys, const QuadOptions &options)
    : m_sys(sys), m_options(options), m_nvars(sys.nvars()), m_unit_allowed(sys.nvars(), false)
{
    for (std::size_t i = 0; i < m_nvars; ++i) {
        const VarRole r = sys.role(i);
        const bool allowed = r != VarRole::InputDerivative || !options.input_free;
        m_unit_allowed[i] = allowed;
        if (allowed) {
            m_units.push_back(mono_var(m_nvars, i));
        }
    }
    MonoSet seen;
    for (std::size_t i = 0; i < sys.dynamic_count(); ++i) {
        for (const auto &[m, c] : sys.rhs.at(i).terms()) {
            if (seen.insert(m).second) {
                m_rhs_targets.push_back(m);
            }
        }
    }
    std::sort(m_rhs_targets.begin(), m_rhs_targets.end(), GrlexGreater{});
}

bool GeneratorSpace::is_base_generator(const Monomial &m) const
{
    std::size_t nonzero = 0;
    std::size_t where = 0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] != 0) {
            if (m[i] != 1 || ++nonzero > 1) {
                return false;
            }
            where = i;
        }
    }
    return nonzero == 0 || m_unit_allowed[where];
}

bool GeneratorSpace::decomposable(const Monomial &m, const MonoSet &w) const
{
    if (is_generator(m, w)) {
        return true;
    }
    const bool laurent = m_options.laurent;
    auto try_factor = [&](const Monomial &g) {
        auto q = mono_div(m, g, laurent);
        return q && is_generator(*q, w);
    };
    for (const auto &g : m_units) {
        if (try_factor(g)) {
            return true;
        }
    }
    for (const auto &g : w) {
        if (try_factor(g)) {
            return true;
        }
    }
    return false;
}

std::optional<Decomposition> GeneratorSpace::best_decomposition(const Monomial &m, const MonoSet &w,
                                                                const std::vector<Monomial> &w_list) const
{
    // Preference: fewest factors taken from the new variables, then the
    // lower-degree factor as small as possible, then grlex order.
    using Key = std::tuple<int, int, Monomial, Monomial>;
    std::optional<std::pair<Key, Decomposition>> best;
    auto consider = [&](const Monomial &a, const Monomial &b) {
        Monomial lo = a;
        Monomial hi = b;
        if (GrlexGreater{}(lo, hi)) {
            std::swap(lo, hi);
        }
        const int in_w = static_cast<int>(w.count(lo)) + static_cast<int>(w.count(hi));
        Key key{in_w, mono_degree(lo), lo, hi};
        auto better = [](const Key &x, const Key &y) {
            if (std::get<0>(x) != std::get<0>(y)) {
                return std::get<0>(x) < std::get<0>(y);
            }
            if (std::get<1>(x) != std::get<1>(y)) {
                return std::get<1>(x) < std::get<1>(y);
            }
            if (std::get<2>(x) != std::get<2>(y)) {
                return GrlexGreater{}(std::get<2>(y), std::get<2>(x));
            }
            return GrlexGreater{}(std::get<3>(y), std::get<3>(x));
        };
        if (!best || better(key, best->first)) {
            best = std::make_pair(key, Decomposition{m, hi, lo});
        }
    };
    const Monomial one = mono_one(m_nvars);
    if (is_generator(m, w)) {
        consider(m, one);
    }
    const bool laurent = m_options.laurent;
    auto try_factor = [&](const Monomial &g) {
        auto q = mono_div(m, g, laurent);
        if (q && !mono_is_one(*q) && is_generator(*q, w)) {
            consider(g, *q);
        }
    };
    for (const auto &g : m_units) {
        try_factor(g);
    }
    for (const auto &g : w_list) {
        try_factor(g);
    }
    if (!best) {
        return std::nullopt;
    }
    // Store the larger factor first; a single generator is (m, 1).
    Decomposition d = best->second;
    if (mono_is_one(d.left)) {
        std::swap(d.left, d.right);
    }
    return d;
}

const Polynomial &GeneratorSpace::lie(const Monomial &m) const
{
    {
        std::lock_guard<std::mutex> lock(m_mutex);
        auto it = m_lie.find(m);
        if (it != m_lie.end()) {
            return it->second;
        }
    }
    Polynomial p = lie_derivative(m, m_sys);
    std::lock_guard<std::mutex> lock(m_mutex);
    return m_lie.emplace(m, std::move(p)).first->second;
}

std::vector<Monomial> GeneratorSpace::lie_monomials(const Monomial &m) const
{
    std::vector<Monomial> out;
    for (const auto &[t, c] : lie(m).terms()) {
        out.push_back(t);
    }
    return out;
}

std::vector<Monomial> GeneratorSpace::missing(const std::vector<Monomial> &w_list) const
{
    const MonoSet w(w_list.begin(), w_list.end());
    MonoSet seen;
    std::vector<Monomial> out;
    auto visit = [&](const Monomial &m) {
        if (seen.insert(m).second && !decomposable(m, w)) {
            out.push_back(m);
        }
    };
    for (const auto &m : m_rhs_targets) {
        visit(m);
    }
    for (const auto &g : w_list) {
        for (const auto &[m, c] : lie(g).terms()) {
            visit(m);
        }
    }
    std::sort(out.begin(), out.end(), GrlexGreater{});
    return out;
}

std::vector<std::string> fresh_names(const PolySystem &sys, std::size_t count)
{
    std::set<std::string> taken;
    for (const auto &n : sys.names()) {
        taken.insert(n);
    }
    for (const auto &p : sys.parameters) {
        taken.insert(p);
    }
    std::vector<std::string> out;
    std::size_t k = sys.lifted.size();
    while (out.size() < count) {
        std::string candidate = "w" + std::to_string(++k);
        if (taken.insert(candidate).second) {
            out.push_back(candidate);
        }
    }
    return out;
}

QuadCertificate build_certificate(const GeneratorSpace &space, const std::vector<Monomial> &w_list_in)
{
    const PolySystem &base = space.system();
    std::vector<Monomial> w_list = w_list_in;
    std::sort(w_list.begin(), w_list.end(), [](const Monomial &a, const Monomial &b) { return GrlexGreater{}(b, a); });
    const MonoSet w(w_list.begin(), w_list.end());

    QuadCertificate cert;
    cert.generators = w_list;
    cert.options = space.options();

    PolySystem &q = cert.system;
    q.states = base.states;
    q.lifted = base.lifted;
    q.inputs = base.inputs;
    q.parameters = base.parameters;
    q.assumptions = base.assumptions;
    const auto names = fresh_names(base, w_list.size());
    const std::size_t nd = base.dynamic_count();
    for (std::size_t k = 0; k < w_list.size(); ++k) {
        std::vector<Expr> factors;
        for (std::size_t i = 0; i < base.nvars(); ++i) {
            if (w_list[k][i] != 0) {
                factors.push_back(power(base.definition(i), Rational(w_list[k][i])));
            }
        }
        q.lifted.push_back(LiftedVar{names[k], product(std::move(factors)), w_list[k],
                                     "monomial " + render_monomial(w_list[k], base.names())});
    }

    const std::size_t nw = w_list.size();
    const std::size_t next = q.nvars();
    std::vector<std::size_t> index_map(base.nvars());
    for (std::size_t i = 0; i < base.nvars(); ++i) {
        index_map[i] = i < nd ? i : i + nw;
    }
    std::map<Monomial, std::size_t> w_index;
    for (std::size_t k = 0; k < nw; ++k) {
        w_index.emplace(w_list[k], nd + k);
    }
    auto symbol_of = [&](const Monomial &g) {
        Monomial out(next, 0);
        if (mono_is_one(g)) {
            return out;
        }
        if (space.is_base_generator(g)) {
            for (std::size_t i = 0; i < g.size(); ++i) {
                if (g[i] != 0) {
                    out[index_map[i]] = 1;
                }
            }
            return out;
        }
        out[w_index.at(g)] = 1;
        return out;
    };

    std::map<Monomial, Decomposition, GrlexGreater> table;
    auto quadratic_row = [&](const Polynomial &p) {
        Polynomial row(next);
        for (const auto &[m, c] : p.terms()) {
            auto it = table.find(m);
            if (it == table.end()) {
                auto d = space.best_decomposition(m, w, w_list);
                if (!d) {
                    throw std::logic_error("build_certificate: monomial without decomposition");
                }
                it = table.emplace(m, *d).first;
            }
            row.add_term(mono_mul(symbol_of(it->second.left), symbol_of(it->second.right)), c);
        }
        return row;
    };
    for (std::size_t i = 0; i < nd; ++i) {
        q.rhs.push_back(quadratic_row(base.rhs.at(i)));
    }
    for (const auto &g : w_list) {
        q.rhs.push_back(quadratic_row(space.lie(g)));
    }
    for (const auto &[m, d] : table) {
        cert.decompositions.push_back(d);
    }
    return cert;
}

bool rows_are_exact(const QuadCertificate &cert, const PolySystem &base)
{
    std::vector<Expr> base_defs;
    for (std::size_t i = 0; i < base.nvars(); ++i) {
        base_defs.push_back(base.definition(i));
    }
    std::vector<Expr> defs;
    for (std::size_t i = 0; i < cert.system.nvars(); ++i) {
        defs.push_back(cert.system.definition(i));
    }
    for (std::size_t i = 0; i < cert.system.dynamic_count(); ++i) {
        const std::string name = cert.system.name(i);
        Polynomial lhs;
        if (auto bi = base.index_of(name); bi && *bi < base.dynamic_count()) {
            lhs = base.rhs.at(*bi);
        } else {
            const auto &lv = cert.system.lifted.at(i - cert.system.states.size());
            if (!lv.monomial) {
                return false;
            }
            lhs = lie_derivative(*lv.monomial, base);
        }
        const Expr residual = lhs.to_expr(base_defs) - cert.system.rhs.at(i).to_expr(defs);
        if (!is_identically_zero(residual)) {
            return false;
        }
    }
    return true;
}

} // namespace detail

CheckResult check_quadratization(const PolySystem &sys, const std::vector<Monomial> &generators,
                                 const QuadOptions &options)
{
    detail::GeneratorSpace space(sys, options);
    for (const auto &g : generators) {
        if (g.size() != sys.nvars()) {
            throw std::invalid_argument("check_quadratization: generator over the wrong variable list");
        }
    }
    auto missing = space.missing(generators);
    if (!missing.empty()) {
        return missing;
    }
    return detail::build_certificate(space, generators);
}

std::vector<int> system_degrees(const PolySystem &sys)
{
    std::vector<int> d(sys.nvars(), 0);
    for (const auto &p : sys.rhs) {
        for (const auto &[m, c] : p.terms()) {
            for (std::size_t i = 0; i < m.size(); ++i) {
                d[i] = std::max(d[i], m[i]);
            }
        }
    }
    return d;
}

long long lattice_bound(const PolySystem &sys, bool with_inputs)
{
    const auto d = system_degrees(sys);
    long long b = 1;
    const std::size_t upto = with_inputs ? sys.dynamic_count() + sys.inputs.size() : sys.dynamic_count();
    for (std::size_t i = 0; i < upto; ++i) {
        b *= d[i] + 1;
        if (b > (1LL << 40)) {
            return b;
        }
    }
    return b;
}

std::vector<Monomial> baseline_full_lattice(const PolySystem &sys)
{
    const auto d = system_degrees(sys);
    const std::size_t n = sys.dynamic_count() + sys.inputs.size();
    std::vector<Monomial> out;
    Monomial m(sys.nvars(), 0);
    // Odometer over 0..d_i for the dynamic variables and inputs.
    while (true) {
        const int deg = mono_degree(m);
        if (deg >= 2) {
            out.push_back(m);
        }
        std::size_t i = 0;
        while (i < n && m[i] == d[i]) {
            m[i] = 0;
            ++i;
        }
        if (i == n) {
            break;
        }
        ++m[i];
    }
    std::sort(out.begin(), out.end(), [](const Monomial &a, const Monomial &b) { return GrlexGreater{}(b, a); });
    return out;
}

PolySystem extract_closed_subsystem(const PolySystem &sys, const std::set<std::string> &seeds)
{
    const std::size_t nd = sys.dynamic_count();
    std::vector<bool> in(nd, false);
    std::vector<std::size_t> stack;
    for (const auto &s : seeds) {
        auto i = sys.index_of(s);
        if (!i || *i >= nd) {
            throw std::invalid_argument("extract_closed_subsystem: '" + s + "' is not a dynamic variable");
        }
        if (!in[*i]) {
            in[*i] = true;
            stack.push_back(*i);
        }
    }
    while (!stack.empty()) {
        const std::size_t i = stack.back();
        stack.pop_back();
        for (const auto &[m, c] : sys.rhs.at(i).terms()) {
            for (std::size_t j = 0; j < nd; ++j) {
                if (m[j] != 0 && !in[j]) {
                    in[j] = true;
                    stack.push_back(j);
                }
            }
        }
    }

    PolySystem out;
    out.inputs = sys.inputs;
    out.parameters = sys.parameters;
    out.assumptions = sys.assumptions;
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < sys.states.size(); ++i) {
        if (in[i]) {
            out.states.push_back(sys.states[i]);
            kept.push_back(i);
        }
    }
    for (std::size_t k = 0; k < sys.lifted.size(); ++k) {
        if (in[sys.states.size() + k]) {
            LiftedVar lv = sys.lifted[k];
            lv.monomial.reset();
            out.lifted.push_back(lv);
            kept.push_back(sys.states.size() + k);
        }
    }
    const std::size_t nk = kept.size();
    const std::size_t ni = sys.inputs.size();
    std::vector<std::size_t> map(sys.nvars(), 0);
    for (std::size_t a = 0; a < nk; ++a) {
        map[kept[a]] = a;
    }
    for (std::size_t j = 0; j < 2 * ni; ++j) {
        map[nd + j] = nk + j;
    }
    for (std::size_t i : kept) {
        Polynomial row(nk + 2 * ni);
        for (const auto &[m, c] : sys.rhs.at(i).terms()) {
            Monomial e(nk + 2 * ni, 0);
            for (std::size_t v = 0; v < m.size(); ++v) {
                if (m[v] != 0) {
                    e[map[v]] += m[v];
                }
            }
            row.add_term(e, c);
        }
        out.rhs.push_back(row);
    }
    return out;
}

} // namespace quadlift
