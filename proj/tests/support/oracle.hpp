#pragma once

// Reference implementations used to cross-check the library. Nothing here
// calls into the quadratizer: systems are integer polynomials kept in plain
// maps and the quadratization test is a direct search over generator pairs.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace oracle {

using Mono = std::vector<int>;
using IntPoly = std::map<Mono, long long>;

struct IntSystem {
    int n = 0;
    std::vector<IntPoly> rhs;
};

inline void add_term(IntPoly &p, const Mono &m, long long c)
{
    if (c == 0) {
        return;
    }
    auto [it, inserted] = p.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) {
            p.erase(it);
        }
    }
}

inline int degree(const Mono &m)
{
    int d = 0;
    for (int e : m) {
        d += e;
    }
    return d;
}

inline IntSystem random_system(std::mt19937 &rng, int max_dim, int max_deg, int max_terms, int coef_range)
{
    std::uniform_int_distribution<int> dim_dist(1, max_dim);
    std::uniform_int_distribution<int> terms_dist(1, max_terms);
    std::uniform_int_distribution<int> deg_dist(0, max_deg);
    std::uniform_int_distribution<int> coef_dist(-coef_range, coef_range);
    IntSystem sys;
    sys.n = dim_dist(rng);
    std::uniform_int_distribution<int> var_dist(0, sys.n - 1);
    for (int i = 0; i < sys.n; ++i) {
        IntPoly p;
        const int terms = terms_dist(rng);
        // Low dimensions may have fewer distinct monomials than requested terms.
        for (int attempt = 0; static_cast<int>(p.size()) < terms && attempt < 50 * terms; ++attempt) {
            Mono m(sys.n, 0);
            const int d = deg_dist(rng);
            for (int k = 0; k < d; ++k) {
                ++m[var_dist(rng)];
            }
            int c = 0;
            while (c == 0) {
                c = coef_dist(rng);
            }
            p[m] = c;
        }
        sys.rhs.push_back(std::move(p));
    }
    return sys;
}

inline std::string var_name(int i)
{
    return "x" + std::to_string(i + 1);
}

/// Source text in the .ode format.
inline std::string to_ode(const IntSystem &sys)
{
    std::ostringstream os;
    os << "vars ";
    for (int i = 0; i < sys.n; ++i) {
        os << (i ? ", " : "") << var_name(i);
    }
    os << ";\n";
    for (int i = 0; i < sys.n; ++i) {
        os << var_name(i) << "' = 0";
        for (const auto &[m, c] : sys.rhs[i]) {
            os << (c < 0 ? " - " : " + ") << (c < 0 ? -c : c);
            for (int j = 0; j < sys.n; ++j) {
                if (m[j] > 0) {
                    os << "*" << var_name(j) << "^" << m[j];
                }
            }
        }
        os << ";\n";
    }
    return os.str();
}

inline IntPoly lie(const Mono &m, const IntSystem &sys)
{
    IntPoly out;
    for (int i = 0; i < sys.n; ++i) {
        if (m[i] == 0) {
            continue;
        }
        for (const auto &[t, c] : sys.rhs[i]) {
            Mono r(sys.n);
            for (int j = 0; j < sys.n; ++j) {
                r[j] = m[j] + t[j] - (j == i ? 1 : 0);
            }
            add_term(out, r, c * m[i]);
        }
    }
    return out;
}

inline std::vector<int> degrees(const IntSystem &sys)
{
    std::vector<int> d(sys.n, 0);
    for (const auto &p : sys.rhs) {
        for (const auto &[m, c] : p) {
            for (int j = 0; j < sys.n; ++j) {
                d[j] = std::max(d[j], m[j]);
            }
        }
    }
    return d;
}

/// Monomials with 0 <= e_i <= d_i and total degree >= 2.
inline std::vector<Mono> lattice(const IntSystem &sys)
{
    const auto d = degrees(sys);
    std::vector<Mono> out;
    Mono m(sys.n, 0);
    while (true) {
        if (degree(m) >= 2) {
            out.push_back(m);
        }
        int i = 0;
        while (i < sys.n && m[i] == d[i]) {
            m[i] = 0;
            ++i;
        }
        if (i == sys.n) {
            break;
        }
        ++m[i];
    }
    return out;
}

/// Direct check: every right-hand-side monomial and every monomial of the
/// derivative of a new variable is a product of at most two generators.
class Checker {
public:
    explicit Checker(const IntSystem &sys) : m_sys(sys)
    {
        for (const auto &p : sys.rhs) {
            for (const auto &[m, c] : p) {
                m_rhs.insert(m);
            }
        }
    }

    bool quadratizes(const std::vector<Mono> &w) const
    {
        std::set<Mono> gens(w.begin(), w.end());
        gens.insert(Mono(m_sys.n, 0));
        for (int i = 0; i < m_sys.n; ++i) {
            Mono e(m_sys.n, 0);
            e[i] = 1;
            gens.insert(e);
        }
        auto ok = [&](const Mono &m) {
            for (const auto &g : gens) {
                Mono rest(m_sys.n);
                bool nonneg = true;
                for (int j = 0; j < m_sys.n; ++j) {
                    rest[j] = m[j] - g[j];
                    nonneg = nonneg && rest[j] >= 0;
                }
                if (nonneg && gens.count(rest)) {
                    return true;
                }
            }
            return false;
        };
        for (const auto &m : m_rhs) {
            if (!ok(m)) {
                return false;
            }
        }
        for (const auto &g : w) {
            for (const auto &[m, c] : lie_cached(g)) {
                if (!ok(m)) {
                    return false;
                }
            }
        }
        return true;
    }

private:
    const IntPoly &lie_cached(const Mono &m) const
    {
        auto it = m_lie.find(m);
        if (it == m_lie.end()) {
            it = m_lie.emplace(m, lie(m, m_sys)).first;
        }
        return it->second;
    }

    const IntSystem &m_sys;
    std::set<Mono> m_rhs;
    mutable std::map<Mono, IntPoly> m_lie;
};

/// Smallest k <= limit such that some k-subset of the lattice quadratizes the
/// system, or nullopt if none exists up to `limit`.
inline std::optional<std::size_t> brute_force_min(const IntSystem &sys, std::size_t limit)
{
    const auto cand = lattice(sys);
    const Checker checker(sys);
    for (std::size_t k = 0; k <= std::min(limit, cand.size()); ++k) {
        std::vector<std::size_t> idx(k);
        for (std::size_t i = 0; i < k; ++i) {
            idx[i] = i;
        }
        while (true) {
            std::vector<Mono> w;
            for (std::size_t i : idx) {
                w.push_back(cand[i]);
            }
            if (checker.quadratizes(w)) {
                return k;
            }
            // next combination
            std::size_t i = k;
            while (i > 0 && idx[i - 1] == cand.size() - k + i - 1) {
                --i;
            }
            if (i == 0) {
                break;
            }
            ++idx[i - 1];
            for (std::size_t j = i; j < k; ++j) {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    return std::nullopt;
}

} // namespace oracle
