#include <doctest.h>

#include <quadlift/certificate.hpp>
#include <quadlift/errors.hpp>
#include <quadlift/normal_form.hpp>
#include <quadlift/polynomializer.hpp>
#include <quadlift/quadratizer.hpp>

#include "support/fixtures.hpp"

#include <json.hpp>

using namespace quadlift;

namespace {

struct Run {
    SystemAST ast;
    PolynomializeResult pr;
    SearchResult search;
    QuadCertificate quad;
    std::string json;
};

Run run(const std::string &name)
{
    Run r;
    r.ast = fixtures::load(name);
    r.pr = polynomialize(exp_gcd_heuristic(r.ast));
    r.search = search_optimal_monomial(r.pr.system);
    REQUIRE(r.search.certificate.has_value());
    r.quad = linear_redundancy_pass(r.pr.system, *r.search.certificate);
    CertificateInfo info;
    info.original = &r.ast;
    info.polynomial = &r.pr.system;
    info.quad = &r.quad;
    info.search = &r.search;
    info.mode = "standard";
    info.optimal = r.search.optimal;
    info.report = verify_certificate(r.ast, r.quad.system);
    r.json = certificate_to_json(info);
    return r;
}

} // namespace

TEST_CASE("json layout")
{
    const Run r = run("x4");
    const auto doc = nlohmann::json::parse(r.json);
    for (const char *key : {"system", "lifting", "generators", "q1", "q2", "decompositions", "eliminations", "stats",
                            "optimal", "mode", "report"}) {
        CHECK(doc.contains(key));
    }
    CHECK(doc["generators"] == nlohmann::json::array({"x^3"}));
    CHECK(doc["stats"]["order"] == 1);
    CHECK(doc["optimal"] == true);
    CHECK(doc["mode"] == "standard");
}

TEST_CASE("json round trip")
{
    for (const char *name : {"x4", "sigmoid", "exp_ax", "power_xa"}) {
        CAPTURE(name);
        const Run r = run(name);
        const LoadedCertificate back = certificate_from_json(r.json);
        CHECK(print_system(back.original) == print_system(r.ast));
        CHECK(back.system.names() == r.quad.system.names());
        REQUIRE(back.system.rhs.size() == r.quad.system.rhs.size());
        for (std::size_t i = 0; i < back.system.rhs.size(); ++i) {
            CHECK(back.system.rhs[i] == r.quad.system.rhs[i]);
            CHECK(is_identically_zero(back.system.definition(i) - r.quad.system.definition(i)));
        }
        CHECK(back.optimal == r.search.optimal);
        CHECK(verify_certificate(back.original, back.system).symbolic_ok);
    }
}

TEST_CASE("malformed documents")
{
    CHECK_THROWS_AS(certificate_from_json("{"), Error);
    CHECK_THROWS_AS(certificate_from_json("{}"), Error);
    CHECK_THROWS_AS(certificate_from_json("[1, 2]"), Error);
}

TEST_CASE("parse_row")
{
    const Run r = run("x4");
    const Polynomial p = parse_row("3*w1^2", r.quad.system);
    CHECK(p == r.quad.system.rhs[1]);
    CHECK_THROWS(parse_row("exp(w1)", r.quad.system));
}
