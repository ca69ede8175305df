#include <doctest.h>

#include <quadlift/errors.hpp>
#include <quadlift/normal_form.hpp>
#include <quadlift/parser.hpp>
#include <quadlift/polynomializer.hpp>
#include <quadlift/verifier.hpp>

#include "support/fixtures.hpp"

using namespace quadlift;

namespace {

std::vector<std::string> definitions(const PolynomializeResult &r)
{
    std::vector<std::string> out;
    for (const auto &v : r.lifting) {
        out.push_back(to_string(v.definition));
    }
    return out;
}

} // namespace

TEST_CASE("already polynomial input is unchanged")
{
    const SystemAST s = parse_system("vars x, y; x' = x*y - 1; y' = x^3;");
    CHECK(verify_polynomial(s));
    const auto r = polynomialize(s);
    CHECK(r.lifting.empty());
    CHECK(verify_polynomial(r.system));
}

TEST_CASE("exp(-a*x)")
{
    const auto r = polynomialize(fixtures::load("exp_ax"));
    REQUIRE(r.lifting.size() == 1);
    CHECK(to_string(r.lifting[0].definition) == "exp(-a*x)");
    CHECK(verify_polynomial(r.system));
}

TEST_CASE("rational power with positivity")
{
    const auto r = polynomialize(fixtures::load("power_xa"));
    CHECK(definitions(r) == std::vector<std::string>{"x^(7/2)", "x^(-1)"});
    CHECK_FALSE(r.system.relations.empty());
}

TEST_CASE("power rule can be disabled")
{
    const SystemAST s = parse_system("vars x; x' = x^(7/2);");
    const auto r = polynomialize(s);
    REQUIRE(r.lifting.size() == 2);
    CHECK(r.lifting[0].provenance.find("x = 0") != std::string::npos);
    PolynomializeOptions off;
    off.power_rule = false;
    try {
        polynomialize(s, off);
        FAIL("expected PolynomializationError");
    } catch (const PolynomializationError &e) {
        CHECK(e.kind() == PolynomializationError::Kind::NonIntegerResidualExponent);
    }
}

TEST_CASE("every supported function lifts")
{
    const SystemAST s = parse_system("vars x; x' = exp(x) + log(x) + sin(x) + cos(x) + tan(x) + sinh(x) + cosh(x);");
    const auto r = polynomialize(s);
    CHECK(verify_polynomial(r.system));
    CHECK(verify_certificate(s, r.system).symbolic_ok);
}

TEST_CASE("variable cap")
{
    PolynomializeOptions opt;
    opt.max_new_variables = 1;
    try {
        polynomialize(fixtures::load("sigmoid"), opt);
        FAIL("expected PolynomializationError");
    } catch (const PolynomializationError &e) {
        CHECK(e.kind() == PolynomializationError::Kind::TooManyVariables);
    }
}

TEST_CASE("exp gcd heuristic merges one family")
{
    const SystemAST s = parse_system("vars x; x' = exp(2*x) + exp(4*x);");
    const SystemAST h = exp_gcd_heuristic(s);
    CHECK(is_identically_zero(h.rhs("x") - s.rhs("x")));
    CHECK(polynomialize(h).lifting.size() == 1);
    CHECK(polynomialize(s).lifting.size() >= 1);
}

TEST_CASE("exp gcd heuristic leaves unrelated exponents alone")
{
    const SystemAST s = parse_system("vars x, y; x' = exp(x) + exp(y); y' = 0;");
    const SystemAST h = exp_gcd_heuristic(s);
    CHECK(h.rhs("x") == s.rhs("x"));
    CHECK(polynomialize(h).lifting.size() == 2);
}

TEST_CASE("exp gcd heuristic splits by sign")
{
    const SystemAST s = parse_system("vars x; x' = exp(2*x) + exp(-3*x);");
    const SystemAST h = exp_gcd_heuristic(s);
    CHECK(is_identically_zero(h.rhs("x") - s.rhs("x")));
    const auto r = polynomialize(h);
    CHECK(r.lifting.size() == 2);
    CHECK(verify_polynomial(r.system));
}

TEST_CASE("lifted rows are polynomial for every fixture")
{
    for (const char *name : {"x4", "x3", "exp_ax", "power_xa", "two_exponentials", "sigmoid", "forced", "mapk_numeric"}) {
        CAPTURE(name);
        const auto r = polynomialize(exp_gcd_heuristic(fixtures::load(name)));
        CHECK(verify_polynomial(r.system));
        CHECK(r.system.rhs.size() == r.system.dynamic_count());
    }
}

TEST_CASE("to_poly_system requires polynomial input")
{
    CHECK_THROWS_AS(to_poly_system(fixtures::load("sigmoid")), PolynomializationError);
    const PolySystem p = to_poly_system(fixtures::load("x4"));
    CHECK(p.rhs[0].to_string(p.names()) == "x^4");
}
