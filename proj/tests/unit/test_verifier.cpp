#include <doctest.h>

#include <quadlift/errors.hpp>
#include <quadlift/normal_form.hpp>
#include <quadlift/parser.hpp>
#include <quadlift/polynomializer.hpp>
#include <quadlift/quadratizer.hpp>
#include <quadlift/simulate.hpp>
#include <quadlift/verifier.hpp>

#include "support/fixtures.hpp"

#include <cmath>
#include <sstream>

using namespace quadlift;

namespace {

QuadCertificate quadratize(const PolySystem &sys)
{
    const auto r = search_optimal_monomial(sys);
    REQUIRE(r.certificate.has_value());
    return linear_redundancy_pass(sys, *r.certificate);
}

} // namespace

TEST_CASE("valid certificates verify symbolically")
{
    for (const char *name : {"x4", "x3", "exp_ax", "sigmoid", "two_exponentials", "power_xa"}) {
        CAPTURE(name);
        const SystemAST ast = fixtures::load(name);
        const auto pr = polynomialize(exp_gcd_heuristic(ast));
        const auto cert = quadratize(pr.system);
        const auto report = verify_certificate(ast, cert.system);
        CHECK(report.symbolic_ok);
        for (const auto &row : report.residuals) {
            CHECK(row.zero);
            CHECK(row.residual == "0");
        }
    }
}

TEST_CASE("tampered rows are reported")
{
    const SystemAST ast = fixtures::load("x4");
    auto cert = quadratize(to_poly_system(ast));
    cert.system.rhs[1] += Polynomial::constant(cert.system.nvars(), Rational(1));
    const auto report = verify_certificate(ast, cert.system);
    CHECK_FALSE(report.symbolic_ok);
    REQUIRE(report.residuals.size() == 2);
    CHECK(report.residuals[0].zero);
    CHECK_FALSE(report.residuals[1].zero);
    CHECK(report.residuals[1].variable == "w1");
    CHECK(report.residuals[1].residual != "0");
    CHECK(report.to_string().find("w1") != std::string::npos);
}

TEST_CASE("time derivative")
{
    const SystemAST ast = fixtures::load("exp_ax");
    const Expr w = parse_expression("exp(-a*x)", symbol_table(ast));
    const Expr d = time_derivative(w, ast);
    const Expr expected = parse_expression("-a*exp(-a*x)", symbol_table(ast)) * ast.rhs("x");
    CHECK(is_identically_zero(d - expected));
}

TEST_CASE("rk4 on x' = x")
{
    const SystemAST ast = parse_system("vars x; x' = x;");
    SimulationSetup setup;
    setup.t_end = 1.0;
    setup.h = 0.01;
    const Trajectory tr = simulate_rk4(ast, {1.0}, setup);
    REQUIRE(!tr.times.empty());
    CHECK(tr.times.back() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(tr.values.back()[0] - std::exp(1.0)) <= 1e-9);
}

TEST_CASE("rk4 lands on t_end with a shortened last step")
{
    const SystemAST ast = parse_system("vars x; x' = -x;");
    SimulationSetup setup;
    setup.t_end = 0.35;
    setup.h = 0.1;
    const Trajectory tr = simulate_rk4(ast, {1.0}, setup);
    CHECK(tr.times.size() == 5);
    CHECK(tr.times.back() == doctest::Approx(0.35));
}

TEST_CASE("simulation errors")
{
    const SystemAST ast = parse_system("vars x; params a; x' = a*x;");
    SimulationSetup setup;
    setup.parameters["a"] = 1.0;
    setup.h = 0;
    auto kind_of = [&](auto &&fn) {
        try {
            fn();
        } catch (const SimulationError &e) {
            return static_cast<int>(e.kind());
        }
        return -1;
    };
    CHECK(kind_of([&] { simulate_rk4(ast, {1.0}, setup); }) == static_cast<int>(SimulationError::Kind::InvalidStep));
    setup.h = 1e-3;
    CHECK(kind_of([&] { simulate_rk4(ast, {1.0, 2.0}, setup); }) ==
          static_cast<int>(SimulationError::Kind::DimensionMismatch));
    SimulationSetup bare;
    CHECK(kind_of([&] { simulate_rk4(ast, {1.0}, bare); }) == static_cast<int>(SimulationError::Kind::MissingParameter));
    const SystemAST blow = parse_system("vars x; x' = x^2;");
    SimulationSetup longrun;
    longrun.t_end = 10.0;
    longrun.h = 0.01;
    CHECK(kind_of([&] { simulate_rk4(blow, {10.0}, longrun); }) ==
          static_cast<int>(SimulationError::Kind::NonFiniteState));
}

TEST_CASE("inputs as functions of time")
{
    const SystemAST ast = parse_system("vars x; inputs u; x' = u;");
    SimulationSetup setup;
    setup.inputs["u"] = parse_time_function("cos(t)", {});
    const Trajectory tr = simulate_rk4(ast, {0.0}, setup);
    CHECK(std::abs(tr.values.back()[0] - std::sin(1.0)) <= 1e-10);
}

TEST_CASE("lifted trajectory matches the definitions")
{
    const SystemAST ast = fixtures::load("sigmoid");
    const auto pr = polynomialize(exp_gcd_heuristic(ast));
    const auto cert = quadratize(pr.system);
    SimulationSetup setup;
    setup.parameters = {{"a", 1.0}, {"b", 0.5}};
    const std::vector<double> x0{0.2};
    const Trajectory ref = simulate_rk4(ast, x0, setup);
    const Trajectory lifted =
        simulate_rk4(cert.system, lifted_initial_state(cert.system, ast.states, x0, setup), setup);
    REQUIRE(lifted.times.size() == ref.times.size());
    for (std::size_t i = 0; i < cert.system.dynamic_count(); ++i) {
        const Expr def = cert.system.definition(i);
        const auto col = lifted.column(cert.system.name(i));
        double worst = 0;
        for (std::size_t k = 0; k < ref.times.size(); ++k) {
            Env env = setup.parameters;
            env["x"] = ref.values[k][0];
            worst = std::max(worst, std::abs(evaluate(def, env) - col[k]));
        }
        CHECK(worst <= 1e-5);
    }

    NumericCheck nc{x0, setup};
    const auto report = verify_certificate(ast, cert.system, nc);
    CHECK(report.symbolic_ok);
    for (const auto &[name, err] : report.numeric_max_error) {
        CAPTURE(name);
        CHECK(err <= 1e-5);
    }
}

TEST_CASE("reconstruction")
{
    const SystemAST ast = parse_system("vars x; x' = -x;");
    SimulationSetup setup;
    const Trajectory tr = simulate_rk4(ast, {1.0}, setup);
    const Expr x = ast.state_symbol(0);
    CHECK(check_reconstruction(tr, x, tr, "x", {}) == 0.0);
    CHECK(check_reconstruction(tr, x * x, tr, "x", {}) > 0.1);
    const Expr bad = function(Kind::Log, x - Expr::integer(2));
    CHECK_THROWS_AS(check_reconstruction(tr, bad, tr, "x", {}), DomainError);
}

TEST_CASE("csv output")
{
    const SystemAST ast = parse_system("vars x, y; x' = y; y' = -x;");
    SimulationSetup setup;
    setup.h = 0.5;
    const Trajectory tr = simulate_rk4(ast, {1.0, 0.0}, setup);
    std::ostringstream os;
    write_csv(os, tr);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,x,y");
    std::getline(in, line);
    CHECK(line == "0,1,0");
    std::size_t rows = 1;
    while (std::getline(in, line)) {
        ++rows;
    }
    CHECK(rows == tr.times.size());
}
