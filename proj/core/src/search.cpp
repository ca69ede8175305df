#include "quad_internal.hpp"

#include <algorithm>
#include <chrono>
#include <climits>
#include <condition_variable>
#include <queue>
#include <set>
#include <stdexcept>
#include <thread>

namespace quadlift {

namespace {

using detail::GeneratorSpace;
using detail::MonoSet;
using Clock = std::chrono::steady_clock;

bool grlex_less(const Monomial &a, const Monomial &b)
{
    return GrlexGreater{}(b, a);
}

bool set_less(const std::vector<Monomial> &a, const std::vector<Monomial> &b)
{
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), grlex_less);
}

/// Candidate lattice for new variables.
class Lattice {
public:
    Lattice(const GeneratorSpace &space, const SearchConfig &cfg) : m_space(space)
    {
        const PolySystem &sys = space.system();
        const auto d = system_degrees(sys);
        const std::size_t n = sys.nvars();
        m_lower.assign(n, 0);
        m_upper.assign(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            switch (sys.role(i)) {
            case VarRole::State:
            case VarRole::Lifted:
                m_upper[i] = cfg.input_free && !cfg.laurent ? INT_MAX / 4 : d[i];
                m_lower[i] = cfg.laurent ? cfg.laurent_floor : 0;
                break;
            case VarRole::Input:
                m_upper[i] = cfg.input_free ? 0 : d[i];
                m_lower[i] = cfg.laurent && !cfg.input_free ? cfg.laurent_floor : 0;
                break;
            case VarRole::InputDerivative:
                break;
            }
        }
    }

    bool admissible(const Monomial &a) const
    {
        if (m_space.is_base_generator(a)) {
            return false;
        }
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i] < m_lower[i] || a[i] > m_upper[i]) {
                return false;
            }
        }
        return true;
    }

    /// Sets of new generators that would make m decomposable, sorted canonically.
    std::vector<std::vector<Monomial>> factorizations(const Monomial &m, const MonoSet &w) const
    {
        const std::size_t n = m.size();
        std::vector<int> lo(n);
        std::vector<int> hi(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (m_space.options().laurent) {
                lo[i] = std::max(m_lower[i], m[i] - m_upper[i]);
                hi[i] = std::min(m_upper[i], m[i] - m_lower[i]);
                // Input derivatives only occur as a bare factor.
                if (m_space.system().role(i) == VarRole::InputDerivative) {
                    lo[i] = 0;
                    hi[i] = m[i];
                }
            } else {
                lo[i] = 0;
                hi[i] = m[i];
            }
            if (lo[i] > hi[i]) {
                return {};
            }
        }
        std::set<std::vector<Monomial>, decltype(&set_less)> found(&set_less);
        Monomial a = lo;
        while (true) {
            Monomial b(n);
            for (std::size_t i = 0; i < n; ++i) {
                b[i] = m[i] - a[i];
            }
            if (!grlex_less(b, a)) {
                const bool ga = m_space.is_generator(a, w);
                const bool gb = m_space.is_generator(b, w);
                if ((ga || admissible(a)) && (gb || admissible(b))) {
                    std::vector<Monomial> added;
                    if (!ga) {
                        added.push_back(a);
                    }
                    if (!gb && b != a) {
                        added.push_back(b);
                    }
                    if (!added.empty()) {
                        std::sort(added.begin(), added.end(), grlex_less);
                        found.insert(std::move(added));
                    }
                }
            }
            std::size_t i = 0;
            while (i < n && a[i] == hi[i]) {
                a[i] = lo[i];
                ++i;
            }
            if (i == n) {
                break;
            }
            ++a[i];
        }
        std::vector<std::vector<Monomial>> out(found.begin(), found.end());
        std::stable_sort(out.begin(), out.end(),
                         [](const auto &x, const auto &y) { return x.size() < y.size(); });
        return out;
    }

    std::size_t size_estimate() const
    {
        std::size_t s = 1;
        for (std::size_t i = 0; i < m_upper.size(); ++i) {
            const long long width = static_cast<long long>(m_upper[i]) - m_lower[i] + 1;
            if (width > 1000) {
                return 0; // unbounded
            }
            s *= static_cast<std::size_t>(width);
        }
        return s;
    }

private:
    const GeneratorSpace &m_space;
    std::vector<int> m_lower;
    std::vector<int> m_upper;
};

struct Node {
    std::vector<Monomial> w; // sorted ascending grlex
    std::size_t key = 0;      // |w| + lower bound
    bool goal = false;
    bool dead = false;
    std::vector<std::vector<Monomial>> branches;
};

struct NodeOrder {
    // std::priority_queue pops the largest; "larger" here means lower priority.
    bool operator()(const Node &a, const Node &b) const
    {
        if (a.key != b.key) {
            return a.key > b.key;
        }
        if (a.w.size() != b.w.size()) {
            return a.w.size() < b.w.size();
        }
        return set_less(b.w, a.w);
    }
};

class Search {
public:
    Search(const PolySystem &sys, const SearchConfig &cfg)
        : m_cfg(cfg), m_space(sys, QuadOptions{cfg.laurent, cfg.input_free}), m_lattice(m_space, cfg),
          m_start(Clock::now())
    {
    }

    SearchResult run()
    {
        const PolySystem &sys = m_space.system();
        const bool has_inputs = !sys.inputs.empty();
        const long long bound_all = lattice_bound(sys, has_inputs);
        const long long bound_dyn = lattice_bound(sys, false);
        long long limit = m_cfg.max_order ? *m_cfg.max_order : (m_cfg.input_free ? bound_dyn : bound_all);
        limit = std::min<long long>(limit, 1 << 20);
        m_result.max_order = static_cast<int>(limit);
        m_result.stats.lattice_size = m_lattice.size_estimate();

        m_best = static_cast<std::size_t>(limit) + 1;
        bool fallback_incomplete = false;
        if (!m_cfg.input_free) {
            auto baseline = baseline_full_lattice(sys);
            if (baseline.size() <= static_cast<std::size_t>(limit) && m_space.missing(baseline).empty()) {
                m_incumbent = baseline;
                m_best = baseline.size();
                m_result.stats.incumbent_history.emplace_back(0, m_best);
            }
            if (m_cfg.laurent) {
                std::size_t terms = 0;
                for (std::size_t i = 0; i < sys.dynamic_count(); ++i) {
                    terms += sys.rhs[i].size();
                }
                if (terms + 1 < m_best) {
                    fallback_incomplete = m_incumbent.has_value();
                    m_best = terms + 1;
                }
            }
        }

        Node root = evaluate({});
        ++m_result.stats.nodes_generated;
        if (root.goal) {
            accept(root.w);
        } else if (!root.dead && root.key < m_best) {
            dive(root);
            m_visited.insert(root.w);
            m_queue.push(std::move(root));
            const unsigned workers = std::max(1U, m_cfg.workers);
            if (workers == 1) {
                worker();
            } else {
                std::vector<std::thread> pool;
                for (unsigned t = 0; t < workers; ++t) {
                    pool.emplace_back([this] { worker(); });
                }
                for (auto &t : pool) {
                    t.join();
                }
            }
        }

        if (!m_incumbent || m_incumbent->size() > static_cast<std::size_t>(limit)) {
            m_result.status = m_budget_hit ? SearchStatus::BudgetExceeded : SearchStatus::NoneUpToOrder;
            m_result.optimal = false;
            return m_result;
        }
        m_result.generators = *m_incumbent;
        m_result.certificate = detail::build_certificate(m_space, *m_incumbent);
        m_result.generators = m_result.certificate->generators;
        if (m_budget_hit) {
            m_result.status = SearchStatus::BudgetExceeded;
            m_result.optimal = false;
        } else {
            m_result.status = SearchStatus::Found;
            m_result.optimal = m_found || !fallback_incomplete;
        }
        return m_result;
    }

private:
    Node evaluate(std::vector<Monomial> w) const
    {
        Node node;
        node.w = std::move(w);
        const auto missing = m_space.missing(node.w);
        if (missing.empty()) {
            node.goal = true;
            node.key = node.w.size();
            return node;
        }
        const MonoSet wset(node.w.begin(), node.w.end());
        std::size_t lb = 1;
        std::optional<std::vector<std::vector<Monomial>>> fewest;
        for (const auto &m : missing) {
            auto f = m_lattice.factorizations(m, wset);
            if (f.empty()) {
                node.dead = true;
                return node;
            }
            lb = std::max(lb, f.front().size());
            if (!fewest || f.size() < fewest->size()) {
                fewest = std::move(f);
            }
        }
        node.key = node.w.size() + lb;
        node.branches = std::move(*fewest);
        return node;
    }

    static std::vector<Monomial> merged(const std::vector<Monomial> &w, const std::vector<Monomial> &added)
    {
        std::vector<Monomial> out = w;
        out.insert(out.end(), added.begin(), added.end());
        std::sort(out.begin(), out.end(), grlex_less);
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    void accept(const std::vector<Monomial> &w)
    {
        if (w.size() < m_best || (!m_incumbent && w.size() <= m_best)) {
            m_incumbent = w;
            m_best = w.size();
            m_found = true;
            m_result.stats.incumbent_history.emplace_back(m_result.stats.nodes_generated, w.size());
        }
    }

    // Depth-first along the first branch to obtain an early incumbent.
    void dive(const Node &root)
    {
        Node cur = root;
        while (!cur.goal && !cur.dead && !cur.branches.empty() && cur.key < m_best) {
            Node next = evaluate(merged(cur.w, cur.branches.front()));
            ++m_result.stats.nodes_generated;
            cur = std::move(next);
        }
        if (cur.goal) {
            accept(cur.w);
        }
    }

    bool over_budget()
    {
        if (m_result.stats.nodes_generated >= m_cfg.max_nodes) {
            return true;
        }
        const double elapsed = std::chrono::duration<double>(Clock::now() - m_start).count();
        return elapsed > m_cfg.time_budget_seconds;
    }

    void worker()
    {
        std::unique_lock<std::mutex> lock(m_mutex);
        while (true) {
            m_cv.wait(lock, [&] {
                return m_stop || (!m_queue.empty() && m_queue.top().key < m_best) ||
                       (m_active == 0 && (m_queue.empty() || m_queue.top().key >= m_best));
            });
            if (m_stop || m_queue.empty() || m_queue.top().key >= m_best) {
                m_stop = true;
                m_cv.notify_all();
                return;
            }
            Node node = m_queue.top();
            m_queue.pop();
            ++m_active;
            ++m_result.stats.nodes_expanded;
            for (const auto &added : node.branches) {
                if (m_stop) {
                    break;
                }
                std::vector<Monomial> child = merged(node.w, added);
                if (child.size() >= m_best || !m_visited.insert(child).second) {
                    continue;
                }
                if (over_budget()) {
                    m_budget_hit = true;
                    m_stop = true;
                    break;
                }
                ++m_result.stats.nodes_generated;
                lock.unlock();
                Node c = evaluate(std::move(child));
                lock.lock();
                if (c.goal) {
                    accept(c.w);
                } else if (!c.dead && c.key < m_best) {
                    m_queue.push(std::move(c));
                }
            }
            --m_active;
            m_cv.notify_all();
        }
    }

    SearchConfig m_cfg;
    GeneratorSpace m_space;
    Lattice m_lattice;
    Clock::time_point m_start;

    std::mutex m_mutex;
    std::condition_variable m_cv;
    std::priority_queue<Node, std::vector<Node>, NodeOrder> m_queue;
    std::set<std::vector<Monomial>> m_visited;
    std::size_t m_best = 0;
    std::optional<std::vector<Monomial>> m_incumbent;
    bool m_found = false;
    bool m_budget_hit = false;
    bool m_stop = false;
    unsigned m_active = 0;
    SearchResult m_result;
};

} // namespace

SearchResult search_optimal_monomial(const PolySystem &sys, const SearchConfig &cfg)
{
    if (cfg.input_free && sys.inputs.empty()) {
        throw std::invalid_argument("input-free search requested for a system without inputs");
    }
    Search s(sys, cfg);
    return s.run();
}

SearchResult search_with_inputs(const PolySystem &sys, const SearchConfig &cfg)
{
    if (sys.inputs.empty()) {
        throw std::invalid_argument("search_with_inputs: the system declares no inputs");
    }
    return search_optimal_monomial(sys, cfg);
}

} // namespace quadlift
