#include <benchmark/benchmark.h>

#include <quadlift/normal_form.hpp>
#include <quadlift/parser.hpp>
#include <quadlift/polynomializer.hpp>
#include <quadlift/quadratizer.hpp>
#include <quadlift/simulate.hpp>
#include <quadlift/verifier.hpp>

#include "support/fixtures.hpp"

using namespace quadlift;

namespace {

PolySystem lifted(const char *name)
{
    return polynomialize(exp_gcd_heuristic(fixtures::load(name))).system;
}

void BM_Parse(benchmark::State &state)
{
    const std::string text = fixtures::read_model("mapk_numeric");
    for (auto _ : state) {
        benchmark::DoNotOptimize(parse_system(text));
    }
}
BENCHMARK(BM_Parse);

void BM_Polynomialize(benchmark::State &state)
{
    const SystemAST ast = fixtures::load("mapk_numeric");
    for (auto _ : state) {
        benchmark::DoNotOptimize(polynomialize(exp_gcd_heuristic(ast)));
    }
}
BENCHMARK(BM_Polynomialize);

// x' = x^n: the minimum order grows slowly while the lattice grows linearly.
void BM_SearchPower(benchmark::State &state)
{
    const std::string text = "vars x; x' = x^" + std::to_string(state.range(0)) + ";";
    const PolySystem sys = to_poly_system(parse_system(text));
    for (auto _ : state) {
        benchmark::DoNotOptimize(search_optimal_monomial(sys));
    }
}
BENCHMARK(BM_SearchPower)->DenseRange(4, 16, 4)->Unit(benchmark::kMillisecond);

void BM_SearchSigmoid(benchmark::State &state)
{
    const PolySystem sys = lifted("sigmoid");
    SearchConfig cfg;
    cfg.workers = static_cast<unsigned>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(search_optimal_monomial(sys, cfg));
    }
}
BENCHMARK(BM_SearchSigmoid)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_SearchMapk(benchmark::State &state)
{
    const PolySystem sys = lifted("mapk_numeric");
    for (auto _ : state) {
        const auto r = search_optimal_monomial(sys);
        benchmark::DoNotOptimize(linear_redundancy_pass(sys, *r.certificate));
    }
}
BENCHMARK(BM_SearchMapk)->Unit(benchmark::kMillisecond)->Iterations(3);

void BM_VerifySigmoid(benchmark::State &state)
{
    const SystemAST ast = fixtures::load("sigmoid");
    const PolySystem sys = lifted("sigmoid");
    const auto cert = search_optimal_monomial(sys).certificate;
    for (auto _ : state) {
        benchmark::DoNotOptimize(verify_certificate(ast, cert->system));
    }
}
BENCHMARK(BM_VerifySigmoid)->Unit(benchmark::kMillisecond);

void BM_ZeroTest(benchmark::State &state)
{
    SymbolTable t;
    t.symbols.emplace("x", Expr::variable("x", 0));
    const Expr e = parse_expression("(1 + exp(x))^(-2)*exp(x) - exp(x)/(1 + 2*exp(x) + exp(2*x))", t);
    for (auto _ : state) {
        benchmark::DoNotOptimize(is_identically_zero(e));
    }
}
BENCHMARK(BM_ZeroTest);

void BM_Rk4(benchmark::State &state)
{
    const SystemAST ast = fixtures::load("sigmoid");
    SimulationSetup setup;
    setup.parameters = {{"a", 1.0}, {"b", 0.5}};
    setup.h = 1e-3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate_rk4(ast, {0.1}, setup));
    }
}
BENCHMARK(BM_Rk4)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
