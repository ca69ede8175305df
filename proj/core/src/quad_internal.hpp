#pragma once

#include <quadlift/quadratizer.hpp>

#include <mutex>
#include <unordered_map>
#include <unordered_set>

namespace quadlift::detail {

using MonoSet = std::unordered_set<Monomial, MonomialHash>;

/// Generator bookkeeping shared by the checker, the search and the redundancy pass.
class GeneratorSpace {
public:
    GeneratorSpace(const PolySystem &sys, const QuadOptions &options);

    const PolySystem &system() const { return m_sys; }
    const QuadOptions &options() const { return m_options; }
    std::size_t nvars() const { return m_nvars; }

    /// 1 or a single variable that is always a generator.
    bool is_base_generator(const Monomial &m) const;
    bool is_generator(const Monomial &m, const MonoSet &w) const
    {
        return is_base_generator(m) || w.count(m) != 0;
    }
    /// Unit monomials of the base generators (1 excluded).
    const std::vector<Monomial> &base_units() const { return m_units; }

    bool decomposable(const Monomial &m, const MonoSet &w) const;
    /// Preferred decomposition, or nullopt.
    std::optional<Decomposition> best_decomposition(const Monomial &m, const MonoSet &w,
                                                    const std::vector<Monomial> &w_list) const;

    /// Monomials of all dynamic right-hand sides.
    const std::vector<Monomial> &rhs_targets() const { return m_rhs_targets; }

    /// Monomials of the Lie derivative of m (thread safe, cached).
    std::vector<Monomial> lie_monomials(const Monomial &m) const;
    const Polynomial &lie(const Monomial &m) const;

    /// Monomials of {rhs} u {lie(w)} without a decomposition.
    std::vector<Monomial> missing(const std::vector<Monomial> &w_list) const;

private:
    const PolySystem &m_sys;
    QuadOptions m_options;
    std::size_t m_nvars;
    std::vector<bool> m_unit_allowed;
    std::vector<Monomial> m_units;
    std::vector<Monomial> m_rhs_targets;
    mutable std::mutex m_mutex;
    mutable std::unordered_map<Monomial, Polynomial, MonomialHash> m_lie;
};

/// Builds the certificate for a generator set known to quadratize.
QuadCertificate build_certificate(const GeneratorSpace &space, const std::vector<Monomial> &w_list);

/// Names for new variables that avoid every name already used by the system.
std::vector<std::string> fresh_names(const PolySystem &sys, std::size_t count);

/// Whether every row of `cert.system` matches the time derivative of its
/// variable's definition, decided by the normal-form zero test.
bool rows_are_exact(const QuadCertificate &cert, const PolySystem &base);

} // namespace quadlift::detail
