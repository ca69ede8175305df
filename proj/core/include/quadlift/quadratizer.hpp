#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <quadlift/poly.hpp>

namespace quadlift {

/// Which generator sets are admissible.
struct QuadOptions {
    /// Allow negative exponents in new variables.
    bool laurent = false;
    /// New variables may not involve inputs and certificates may not use input derivatives.
    bool input_free = false;
};

/// m = left * right with both factors in the generator set; right is the
/// monomial 1 when m is itself a generator.
struct Decomposition {
    Monomial target;
    Monomial left;
    Monomial right;
};

/// A new variable replaced by an affine combination of the remaining
/// generators, justified by one of the system's algebraic relations.
struct Elimination {
    std::string name;
    std::string replacement;
};

struct QuadCertificate {
    /// New monomial variables over the variables of the input system.
    std::vector<Monomial> generators;
    /// Quadratic system. Its lifted variables are those of the input system
    /// followed by one entry per generator.
    PolySystem system;
    /// Sorted by target, larger monomials first.
    std::vector<Decomposition> decompositions;
    std::vector<Elimination> eliminations;
    QuadOptions options;

    std::size_t order() const { return system.lifted.size(); }
};

using CheckResult = std::variant<QuadCertificate, std::vector<Monomial>>;

/// Checks whether `generators` quadratizes `sys`. On failure returns every
/// monomial that has no decomposition over {1} u variables u generators.
CheckResult check_quadratization(const PolySystem &sys, const std::vector<Monomial> &generators,
                                 const QuadOptions &options = {});

/// Per-variable degrees d_i over all right-hand sides.
std::vector<int> system_degrees(const PolySystem &sys);

/// prod_i (d_i + 1) over the dynamic variables (and inputs when `with_inputs`).
long long lattice_bound(const PolySystem &sys, bool with_inputs);

/// All monomials with exponents 0 <= e_i <= d_i (inputs included when the
/// system has any), minus 1 and the bare variables.
std::vector<Monomial> baseline_full_lattice(const PolySystem &sys);

struct SearchConfig {
    /// Largest order to consider. Defaults to the lattice bound (or, in
    /// input-free mode, the bound over the dynamic variables only).
    std::optional<int> max_order;
    std::size_t max_nodes = 200000;
    double time_budget_seconds = 60.0;
    bool laurent = false;
    bool input_free = false;
    int laurent_floor = -2;
    unsigned workers = 1;
};

enum class SearchStatus { Found, BudgetExceeded, NoneUpToOrder };

struct SearchStats {
    std::size_t nodes_expanded = 0;
    std::size_t nodes_generated = 0;
    std::size_t lattice_size = 0;
    /// (nodes expanded when found, order) for every improvement of the incumbent.
    std::vector<std::pair<std::size_t, std::size_t>> incumbent_history;
};

struct SearchResult {
    SearchStatus status = SearchStatus::NoneUpToOrder;
    /// Minimum order proven (within the candidate lattice).
    bool optimal = false;
    std::vector<Monomial> generators;
    std::optional<QuadCertificate> certificate;
    SearchStats stats;
    int max_order = 0;
};

/// Best-first branch and bound for a minimum-order monomial quadratization.
/// Systems with inputs may use them in new variables and the input derivatives
/// in the certificate unless cfg.input_free is set.
SearchResult search_optimal_monomial(const PolySystem &sys, const SearchConfig &cfg = {});

/// Same search for systems with declared inputs; throws std::invalid_argument otherwise.
SearchResult search_with_inputs(const PolySystem &sys, const SearchConfig &cfg = {});

/// Greedily removes new variables (generators, then the lifted variables of
/// `sys`), largest degree first. A variable is removed when the remaining set
/// still quadratizes, or when one of `sys.relations` expresses it as an affine
/// combination of the remaining generators; each removal is re-validated.
QuadCertificate linear_redundancy_pass(const PolySystem &sys, const QuadCertificate &cert);

/// Smallest set of dynamic variables containing `seeds` whose right-hand
/// sides only mention variables of the set (and inputs).
PolySystem extract_closed_subsystem(const PolySystem &sys, const std::set<std::string> &seeds);

/// Renders a monomial over the system's variable names, e.g. `x^2*w1`.
std::string render_monomial(const Monomial &m, const std::vector<std::string> &names);

} // namespace quadlift
