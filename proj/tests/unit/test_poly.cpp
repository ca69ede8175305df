#include <doctest.h>

#include <quadlift/errors.hpp>
#include <quadlift/parser.hpp>
#include <quadlift/poly.hpp>
#include <quadlift/polynomializer.hpp>

#include <random>

using namespace quadlift;

namespace {

Polynomial X(std::size_t n, std::size_t i)
{
    return Polynomial::variable(n, i);
}

Polynomial C(std::size_t n, long c)
{
    return Polynomial::constant(n, Rational(c));
}

Polynomial random_poly(std::mt19937 &rng, std::size_t n)
{
    std::uniform_int_distribution<int> e(0, 3);
    std::uniform_int_distribution<int> c(-5, 5);
    Polynomial p(n);
    for (int k = 0; k < 4; ++k) {
        Monomial m(n);
        for (auto &x : m) {
            x = e(rng);
        }
        p.add_term(m, Rational(c(rng)));
    }
    return p;
}

} // namespace

TEST_CASE("monomial operations")
{
    const Monomial a{2, 1, 0};
    const Monomial b{1, 0, 3};
    CHECK(mono_mul(a, b) == Monomial{3, 1, 3});
    CHECK(mono_div(a, Monomial{1, 1, 0}) == Monomial{1, 0, 0});
    CHECK_FALSE(mono_div(a, b).has_value());
    CHECK(mono_div(a, b, true) == Monomial{1, 1, -3});
    CHECK(mono_divides(Monomial{1, 0, 0}, a));
    CHECK_FALSE(mono_divides(b, a));
    CHECK(mono_degree(a) == 3);
    CHECK(mono_is_one(mono_one(3)));
    CHECK(mono_var(3, 2, 4) == Monomial{0, 0, 4});
    CHECK(mono_has_negative(Monomial{1, -1}));
}

TEST_CASE("grlex order")
{
    const GrlexGreater gt;
    CHECK(gt(Monomial{0, 3}, Monomial{2, 0}));
    CHECK(gt(Monomial{2, 0}, Monomial{1, 1}));
    CHECK(gt(Monomial{1, 1}, Monomial{0, 2}));
    CHECK_FALSE(gt(Monomial{1, 1}, Monomial{1, 1}));
}

TEST_CASE("polynomial arithmetic")
{
    const std::size_t n = 2;
    const Polynomial x = X(n, 0), y = X(n, 1);
    const Polynomial p = (x + y) * (x - y);
    CHECK(p == x * x - y * y);
    CHECK((x + y).pow(3) == x.pow(3) + x.pow(2) * y * Coefficient(Rational(3)) + x * y.pow(2) * Coefficient(Rational(3)) +
                                y.pow(3));
    CHECK((p - p).is_zero());
    CHECK(p.to_string({"x", "y"}) == "x^2 - y^2");
    CHECK(p.substitute(1, x) == Polynomial(n));
    CHECK(C(n, 0).is_zero());
}

TEST_CASE("ring laws on random polynomials")
{
    std::mt19937 rng(5);
    for (int k = 0; k < 50; ++k) {
        const Polynomial a = random_poly(rng, 3), b = random_poly(rng, 3), c = random_poly(rng, 3);
        CHECK(a * b == b * a);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK((a * b).partial_derivative(1) == a.partial_derivative(1) * b + a * b.partial_derivative(1));
    }
}

TEST_CASE("partial derivative and degrees")
{
    const std::size_t n = 2;
    const Polynomial x = X(n, 0), y = X(n, 1);
    const Polynomial p = x.pow(3) * y + y.pow(2) * Coefficient(Rational(5)) - C(n, 7);
    CHECK(p.partial_derivative(0) == x.pow(2) * y * Coefficient(Rational(3)));
    CHECK(p.partial_derivative(1) == x.pow(3) + y * Coefficient(Rational(10)));
    const auto d = p.degrees();
    CHECK(d.per_variable == std::vector<int>{3, 2});
    CHECK(d.total == 4);
    CHECK(Polynomial(n).degrees().total == -1);
}

TEST_CASE("coefficient ring")
{
    const Coefficient a = Coefficient::atom(Expr::parameter("a"));
    const Coefficient b = Coefficient::atom(Expr::parameter("b"));
    CHECK((a * a.inverse()) == Coefficient(Rational(1)));
    CHECK(((a + b) * (a - b)) == a * a - b * b);
    CHECK_FALSE((a + b).is_monomial());
    CHECK((a * Coefficient(Rational(2))).is_monomial());
    CHECK(Coefficient(Rational(3, 4)).rational() == Rational(3, 4));
    CHECK((a * b).evaluate(Env{{"a", 2.0}, {"b", 3.0}}) == doctest::Approx(6.0));
    const Coefficient e = Coefficient::from_expr(parse_expression("a^2*exp(-b)", SymbolTable{{{"a", Expr::parameter("a")}, {"b", Expr::parameter("b")}}, {}}));
    CHECK(e.is_monomial());
    CHECK_FALSE(e.is_rational());
}

TEST_CASE("lie derivative")
{
    const PolySystem sys = to_poly_system(parse_system("vars x, y; x' = y; y' = -x;"));
    // d/dt (x^2 + y^2) = 0
    const Polynomial r = Polynomial::term(Monomial{2, 0}, Rational(1)) + Polynomial::term(Monomial{0, 2}, Rational(1));
    CHECK(lie_derivative(r, sys).is_zero());
    // d/dt x^2*y = 2*x*y^2 - x^3
    const Polynomial d = lie_derivative(Monomial{2, 1}, sys);
    CHECK(d.to_string(sys.names()) == "-x^3 + 2*x*y^2");
}

TEST_CASE("lie derivative with inputs")
{
    const PolySystem sys = to_poly_system(parse_system("vars x; inputs u; x' = -x + x^2*u;"));
    REQUIRE(sys.nvars() == 3);
    // d/dt (x*u) = (-x + x^2 u) u + x u'
    const Polynomial d = lie_derivative(Monomial{1, 1, 0}, sys);
    CHECK(d.to_string(sys.names()) == "x^2*u^2 - x*u + x*u'");
    CHECK_THROWS_AS(lie_derivative(Monomial{0, 0, 1}, sys), MissingRhsError);
}

TEST_CASE("lie derivative is a derivation")
{
    const PolySystem sys = to_poly_system(parse_system("vars x, y, z; x' = y*z - 2; y' = x^2 - z; z' = 3*x*y*z;"));
    std::mt19937 rng(17);
    for (int k = 0; k < 30; ++k) {
        const Polynomial a = random_poly(rng, 3), b = random_poly(rng, 3);
        CHECK(lie_derivative(a * b, sys) == lie_derivative(a, sys) * b + a * lie_derivative(b, sys));
        CHECK(lie_derivative(a + b, sys) == lie_derivative(a, sys) + lie_derivative(b, sys));
    }
}

TEST_CASE("to_polynomial reports the first non-polynomial subterm")
{
    const SystemAST ast = parse_system("vars x; x' = x^2 + exp(x)*log(x);");
    ConversionContext ctx;
    ctx.nvars = 1;
    ctx.index["x"] = 0;
    const auto r = to_polynomial(ast.rhs("x"), ctx);
    REQUIRE(std::holds_alternative<Expr>(r));
    CHECK(std::get<Expr>(r).kind() == Kind::Exp);

    ctx.laurent = true;
    const auto q = to_polynomial(parse_expression("x^(-2) + 1", symbol_table(ast)), ctx);
    REQUIRE(std::holds_alternative<Polynomial>(q));
    CHECK(std::get<Polynomial>(q).terms().count(Monomial{-2}) == 1);
}
