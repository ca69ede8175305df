#include <doctest.h>

#include <quadlift/certificate.hpp>
#include <quadlift/parser.hpp>
#include <quadlift/polynomializer.hpp>
#include <quadlift/quadratizer.hpp>

#include "support/fixtures.hpp"
#include "support/oracle.hpp"

#include <algorithm>
#include <random>
#include <set>

using namespace quadlift;

namespace {

PolySystem poly(const char *text)
{
    return to_poly_system(parse_system(text));
}

std::vector<std::string> rendered(const std::vector<Monomial> &ms, const PolySystem &sys)
{
    std::vector<std::string> out;
    for (const auto &m : ms) {
        out.push_back(render_monomial(m, sys.names()));
    }
    return out;
}

} // namespace

TEST_CASE("check_quadratization: x' = x^4")
{
    const PolySystem sys = to_poly_system(fixtures::load("x4"));
    const auto none = check_quadratization(sys, {});
    REQUIRE(std::holds_alternative<std::vector<Monomial>>(none));
    CHECK(rendered(std::get<std::vector<Monomial>>(none), sys) == std::vector<std::string>{"x^4"});

    const auto ok = check_quadratization(sys, {Monomial{3}});
    REQUIRE(std::holds_alternative<QuadCertificate>(ok));
    const auto &cert = std::get<QuadCertificate>(ok);
    CHECK(cert.order() == 1);
    CHECK(cert.system.rhs[0].to_string(cert.system.names()) == "x*w1");
    CHECK(cert.system.rhs[1].to_string(cert.system.names()) == "3*w1^2");
}

TEST_CASE("decomposable monomials only grow with the generator set")
{
    const PolySystem sys = poly("vars x, y; x' = x^2*y + y^3; y' = x^3;");
    std::mt19937 rng(3);
    const auto lattice = baseline_full_lattice(sys);
    auto missing = [&](const std::vector<Monomial> &w) {
        const auto r = check_quadratization(sys, w);
        if (const auto *m = std::get_if<std::vector<Monomial>>(&r)) {
            return std::set<Monomial>(m->begin(), m->end());
        }
        return std::set<Monomial>{};
    };
    for (int k = 0; k < 40; ++k) {
        std::vector<Monomial> w;
        for (const auto &m : lattice) {
            if (rng() % 3 == 0) {
                w.push_back(m);
            }
        }
        const auto before = missing(w);
        for (const auto &m : lattice) {
            if (std::find(w.begin(), w.end(), m) != w.end()) {
                continue;
            }
            auto bigger = w;
            bigger.push_back(m);
            // Anything still missing must be missing before or come from the new derivative.
            const Polynomial dm = lie_derivative(m, sys);
            for (const auto &t : missing(bigger)) {
                CHECK((before.count(t) == 1 || dm.terms().count(t) == 1));
            }
        }
    }
}

TEST_CASE("baseline lattice always quadratizes")
{
    std::mt19937 rng(99);
    for (int k = 0; k < 25; ++k) {
        const auto isys = oracle::random_system(rng, 3, 3, 3, 4);
        const PolySystem sys = to_poly_system(parse_system(oracle::to_ode(isys)));
        CHECK(std::holds_alternative<QuadCertificate>(check_quadratization(sys, baseline_full_lattice(sys))));
        CHECK(static_cast<long long>(baseline_full_lattice(sys).size()) <= lattice_bound(sys, false));
    }
}

TEST_CASE("already quadratic systems need no variables")
{
    const PolySystem sys = poly("vars x, y; x' = x*y - x; y' = -y^2 + 3;");
    const auto r = search_optimal_monomial(sys);
    CHECK(r.status == SearchStatus::Found);
    CHECK(r.optimal);
    CHECK(r.generators.empty());
}

TEST_CASE("input-affine linear system")
{
    const PolySystem sys = poly("vars x; inputs u; x' = u*x;");
    const auto r = search_with_inputs(sys);
    CHECK(r.status == SearchStatus::Found);
    CHECK(r.generators.empty());
    CHECK_THROWS_AS(search_with_inputs(poly("vars x; x' = x^3;")), std::invalid_argument);
}

TEST_CASE("search matches brute force on small systems")
{
    std::mt19937 rng(12345);
    for (int k = 0; k < 15; ++k) {
        const auto isys = oracle::random_system(rng, 2, 4, 3, 3);
        const PolySystem sys = to_poly_system(parse_system(oracle::to_ode(isys)));
        const auto r = search_optimal_monomial(sys);
        REQUIRE(r.status == SearchStatus::Found);
        const auto expected = oracle::brute_force_min(isys, r.generators.size());
        CHECK(expected == r.generators.size());
        std::vector<oracle::Mono> w(r.generators.begin(), r.generators.end());
        CHECK(oracle::Checker(isys).quadratizes(w));
    }
}

TEST_CASE("search is deterministic and independent of worker count")
{
    const SystemAST ast = fixtures::load("sigmoid");
    const auto pr = polynomialize(exp_gcd_heuristic(ast));
    SearchConfig one;
    SearchConfig three;
    three.workers = 3;
    const auto a = search_optimal_monomial(pr.system, one);
    const auto b = search_optimal_monomial(pr.system, one);
    const auto c = search_optimal_monomial(pr.system, three);
    REQUIRE(a.certificate.has_value());
    REQUIRE(b.certificate.has_value());
    REQUIRE(c.certificate.has_value());
    CHECK(a.generators == b.generators);
    CHECK(a.generators.size() == c.generators.size());

    auto json = [&](const SearchResult &r) {
        CertificateInfo info;
        info.original = &ast;
        info.polynomial = &pr.system;
        info.quad = &*r.certificate;
        info.search = &r;
        info.mode = "standard";
        info.optimal = r.optimal;
        std::string s = certificate_to_json(info);
        // Timing-independent fields only: stats are compared separately.
        return s.substr(0, s.find("\"stats\""));
    };
    CHECK(json(a) == json(b));
}

TEST_CASE("budget exhaustion is reported")
{
    const PolySystem sys = to_poly_system(fixtures::load("x4"));
    SearchConfig cfg;
    cfg.max_order = 0;
    const auto r = search_optimal_monomial(sys, cfg);
    CHECK(r.status == SearchStatus::NoneUpToOrder);
    CHECK_FALSE(r.certificate.has_value());
}

TEST_CASE("laurent search never exceeds the standard order")
{
    for (const char *text : {"vars x; x' = x^4;", "vars x, y; x' = x^2*y; y' = x*y^2 + 1;",
                             "vars x; x' = x^3 + x^2;"}) {
        CAPTURE(text);
        const PolySystem sys = poly(text);
        SearchConfig lc;
        lc.laurent = true;
        const auto s = search_optimal_monomial(sys);
        const auto l = search_optimal_monomial(sys, lc);
        REQUIRE(l.certificate.has_value());
        CHECK(l.generators.size() <= s.generators.size());
        CHECK(l.generators.size() <= sys.rhs.size() + 1 + s.generators.size());
    }
}

TEST_CASE("input-free mode")
{
    const PolySystem sys = to_poly_system(fixtures::load("forced"));
    SearchConfig cfg;
    cfg.input_free = true;
    cfg.max_order = 6;
    const auto r = search_with_inputs(sys, cfg);
    CHECK(r.status == SearchStatus::NoneUpToOrder);
    const auto std_r = search_with_inputs(sys);
    REQUIRE(std_r.certificate.has_value());
    CHECK(rendered(std_r.generators, sys) == std::vector<std::string>{"x*u"});
}

TEST_CASE("redundancy pass keeps a minimal certificate")
{
    const PolySystem sys = to_poly_system(fixtures::load("x4"));
    const auto r = search_optimal_monomial(sys);
    REQUIRE(r.certificate.has_value());
    const auto pruned = linear_redundancy_pass(sys, *r.certificate);
    CHECK(pruned.order() == r.certificate->order());
    CHECK(pruned.eliminations.empty());

    // An extra, unneeded generator is dropped.
    const auto padded = check_quadratization(sys, {Monomial{3}, Monomial{2}});
    REQUIRE(std::holds_alternative<QuadCertificate>(padded));
    CHECK(linear_redundancy_pass(sys, std::get<QuadCertificate>(padded)).order() == 1);
}

TEST_CASE("closed subsystem")
{
    const PolySystem sys = poly("vars x, y, z; x' = x*y; y' = y^2; z' = x + z;");
    const PolySystem all = extract_closed_subsystem(sys, {"x", "y", "z"});
    CHECK(all.states == sys.states);
    const PolySystem xy = extract_closed_subsystem(sys, {"x"});
    CHECK(xy.states == std::vector<std::string>{"x", "y"});
    const PolySystem y = extract_closed_subsystem(sys, {"y"});
    CHECK(y.states == std::vector<std::string>{"y"});
    CHECK(extract_closed_subsystem(sys, {}).dynamic_count() == 0);
}
