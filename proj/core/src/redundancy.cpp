#include "quad_internal.hpp"

#include <algorithm>
#include <map>

namespace quadlift {

namespace {

/// Exponent vector over the base system for every variable of the certificate system.
std::vector<Monomial> base_monomials(const QuadCertificate &cert, const PolySystem &base)
{
    const PolySystem &q = cert.system;
    std::vector<Monomial> out;
    for (std::size_t i = 0; i < q.nvars(); ++i) {
        const std::string name = q.name(i);
        if (auto bi = base.index_of(name)) {
            out.push_back(mono_var(base.nvars(), *bi));
            continue;
        }
        const auto &lv = q.lifted.at(i - q.states.size());
        out.push_back(*lv.monomial);
    }
    return out;
}

Monomial drop_index(const Monomial &m, std::size_t idx)
{
    Monomial out;
    out.reserve(m.size() - 1);
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (i != idx) {
            out.push_back(m[i]);
        }
    }
    return out;
}

Polynomial drop_variable(const Polynomial &p, std::size_t idx)
{
    Polynomial out(p.nvars() - 1);
    for (const auto &[m, c] : p.terms()) {
        out.add_term(drop_index(m, idx), c);
    }
    return out;
}

/// Affine expression for variable `v` over the other certificate variables,
/// derived from a multiple of one relation, or nullopt.
std::optional<Polynomial> affine_replacement(const QuadCertificate &cert, const PolySystem &base,
                                             const std::vector<Monomial> &bm, std::size_t v)
{
    const PolySystem &q = cert.system;
    const std::size_t n = q.nvars();
    const bool laurent = cert.options.laurent;
    std::map<Monomial, std::size_t> lookup;
    for (std::size_t i = 0; i < n; ++i) {
        if (i == v) {
            continue;
        }
        if (q.role(i) == VarRole::InputDerivative && cert.options.input_free) {
            continue;
        }
        lookup.emplace(bm[i], i);
    }
    const Monomial one = mono_one(base.nvars());
    for (const auto &r : base.relations) {
        for (const auto &[t, ct] : r.terms()) {
            if (!ct.is_monomial()) {
                continue;
            }
            auto mult = mono_div(bm[v], t, laurent);
            if (!mult) {
                continue;
            }
            const Coefficient scale = -ct.inverse();
            Polynomial value(n);
            bool ok = true;
            for (const auto &[t2, c2] : r.terms()) {
                if (t2 == t) {
                    continue;
                }
                const Monomial target = mono_mul(*mult, t2);
                if (target == one) {
                    value.add_term(mono_one(n), c2 * scale);
                    continue;
                }
                auto it = lookup.find(target);
                if (it == lookup.end()) {
                    ok = false;
                    break;
                }
                value.add_term(mono_var(n, it->second), c2 * scale);
            }
            if (ok) {
                return value;
            }
        }
    }
    return std::nullopt;
}

/// Decomposition table read off the quadratic rows.
std::vector<Decomposition> table_from_rows(const QuadCertificate &cert, const std::vector<Monomial> &bm)
{
    const std::size_t nb = bm.empty() ? 0 : bm.front().size();
    std::map<Monomial, Decomposition, GrlexGreater> table;
    for (const auto &row : cert.system.rhs) {
        for (const auto &[m, c] : row.terms()) {
            std::vector<Monomial> factors;
            for (std::size_t i = 0; i < m.size(); ++i) {
                for (int k = 0; k < m[i]; ++k) {
                    factors.push_back(bm[i]);
                }
            }
            while (factors.size() < 2) {
                factors.push_back(mono_one(nb));
            }
            if (GrlexGreater{}(factors[1], factors[0])) {
                std::swap(factors[0], factors[1]);
            }
            const Monomial target = mono_mul(factors[0], factors[1]);
            table.emplace(target, Decomposition{target, factors[0], factors[1]});
        }
    }
    std::vector<Decomposition> out;
    for (const auto &[m, d] : table) {
        out.push_back(d);
    }
    return out;
}

std::optional<QuadCertificate> eliminate(const QuadCertificate &cert, const PolySystem &base, std::size_t v,
                                         const Polynomial &value)
{
    const PolySystem &q = cert.system;
    QuadCertificate out;
    out.options = cert.options;
    out.eliminations = cert.eliminations;
    out.eliminations.push_back(Elimination{q.name(v), value.to_string(q.names())});

    const std::size_t k = v - q.states.size();
    const std::size_t base_lifted = q.lifted.size() - cert.generators.size();
    out.generators = cert.generators;
    if (k >= base_lifted) {
        out.generators.erase(out.generators.begin() + static_cast<std::ptrdiff_t>(k - base_lifted));
    }

    PolySystem &r = out.system;
    r.states = q.states;
    r.lifted = q.lifted;
    r.lifted.erase(r.lifted.begin() + static_cast<std::ptrdiff_t>(k));
    r.inputs = q.inputs;
    r.parameters = q.parameters;
    r.assumptions = q.assumptions;
    for (std::size_t i = 0; i < q.dynamic_count(); ++i) {
        if (i == v) {
            continue;
        }
        const Polynomial row = q.rhs[i].substitute(v, value);
        if (row.degrees().total > 2) {
            return std::nullopt;
        }
        r.rhs.push_back(drop_variable(row, v));
    }
    if (!detail::rows_are_exact(out, base)) {
        return std::nullopt;
    }
    out.decompositions = table_from_rows(out, base_monomials(out, base));
    return out;
}

} // namespace

QuadCertificate linear_redundancy_pass(const PolySystem &sys, const QuadCertificate &cert)
{
    QuadCertificate cur = cert;

    // Plain drops: the remaining generators still quadratize on their own.
    bool changed = true;
    while (changed && cur.eliminations.empty()) {
        changed = false;
        std::vector<Monomial> order = cur.generators;
        std::stable_sort(order.begin(), order.end(),
                         [](const Monomial &a, const Monomial &b) { return mono_degree(a) > mono_degree(b); });
        for (const auto &g : order) {
            std::vector<Monomial> rest;
            for (const auto &h : cur.generators) {
                if (h != g) {
                    rest.push_back(h);
                }
            }
            auto res = check_quadratization(sys, rest, cur.options);
            if (auto *c = std::get_if<QuadCertificate>(&res)) {
                cur = std::move(*c);
                changed = true;
                break;
            }
        }
    }

    // Affine drops through the recorded relations. New variables first (by
    // degree), then the lifted variables of `sys`.
    changed = true;
    while (changed) {
        changed = false;
        const auto bm = base_monomials(cur, sys);
        const PolySystem &q = cur.system;
        std::vector<std::size_t> candidates;
        for (std::size_t i = q.states.size(); i < q.dynamic_count(); ++i) {
            candidates.push_back(i);
        }
        const std::size_t base_lifted = q.lifted.size() - cur.generators.size();
        std::stable_sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
            const bool wa = a - q.states.size() >= base_lifted;
            const bool wb = b - q.states.size() >= base_lifted;
            if (wa != wb) {
                return wa;
            }
            return mono_degree(bm[a]) > mono_degree(bm[b]);
        });
        for (std::size_t v : candidates) {
            auto value = affine_replacement(cur, sys, bm, v);
            if (!value) {
                continue;
            }
            if (auto next = eliminate(cur, sys, v, *value)) {
                cur = std::move(*next);
                changed = true;
                break;
            }
        }
    }
    return cur;
}

} // namespace quadlift
