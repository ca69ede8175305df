#include <quadlift/certificate.hpp>
#include <quadlift/errors.hpp>
#include <quadlift/parser.hpp>
#include <quadlift/polynomializer.hpp>
#include <quadlift/quadratizer.hpp>
#include <quadlift/simulate.hpp>
#include <quadlift/verifier.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using namespace quadlift;

namespace {

enum ExitCode { kOk = 0, kError = 1, kNotOptimal = 2, kNone = 3 };

struct Options {
    std::string input;
    bool laurent = false;
    bool input_free = false;
    std::optional<int> max_order;
    bool no_gcd = false;
    bool no_redundancy = false;
    unsigned workers = 1;
    unsigned seed = 0;
    bool json = false;
    double time_budget = 60.0;
    std::size_t max_nodes = 200000;
    std::vector<std::string> params;
    std::vector<double> x0;
    double h = 1e-3;
    double t_end = 1.0;
    std::vector<std::string> input_fns;
    std::vector<std::string> seeds;
    bool lifted = false;
    std::string out;
};

std::string read_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

SystemAST load_system(const std::string &path)
{
    try {
        return parse_system(read_file(path));
    } catch (const ParseError &e) {
        throw Error(path + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) + ": " + e.detail());
    }
}

Env parse_params(const std::vector<std::string> &items)
{
    Env env;
    for (const auto &item : items) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw Error("--params expects name=value, got '" + item + "'");
        }
        env[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    }
    return env;
}

SimulationSetup make_setup(const Options &opt, const std::vector<std::string> &parameters)
{
    SimulationSetup setup;
    setup.parameters = parse_params(opt.params);
    setup.h = opt.h;
    setup.t_end = opt.t_end;
    for (const auto &item : opt.input_fns) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw Error("--input expects name=expression, got '" + item + "'");
        }
        setup.inputs[item.substr(0, eq)] = parse_time_function(item.substr(eq + 1), parameters);
    }
    return setup;
}

std::string mode_name(const Options &opt, const PolySystem &sys)
{
    if (opt.input_free) {
        return "input-free";
    }
    if (opt.laurent) {
        return "laurent";
    }
    return sys.inputs.empty() ? "standard" : "inputs";
}

void emit(const Options &opt, const CertificateInfo &info, const std::string &human)
{
    if (opt.json) {
        const std::string path = opt.out.empty() ? opt.input + ".cert.json" : opt.out;
        std::ofstream os(path);
        if (!os) {
            throw Error("cannot write '" + path + "'");
        }
        os << certificate_to_json(info);
        std::cout << "wrote " << path << '\n';
    } else {
        std::cout << human;
    }
}

std::string describe_lifting(const PolySystem &sys)
{
    std::ostringstream os;
    for (const auto &lv : sys.lifted) {
        os << "  " << lv.name << " = " << to_string(lv.definition) << '\n';
    }
    return os.str();
}

std::optional<NumericCheck> numeric_check(const Options &opt, const SystemAST &ast)
{
    if (opt.x0.empty()) {
        return std::nullopt;
    }
    return NumericCheck{opt.x0, make_setup(opt, ast.parameters)};
}

int run_polynomialize(const Options &opt)
{
    SystemAST ast = load_system(opt.input);
    const SystemAST prepared = opt.no_gcd ? ast : exp_gcd_heuristic(ast);
    const PolynomializeResult res = polynomialize(prepared);
    const VerificationReport report = verify_certificate(ast, res.system, numeric_check(opt, ast));

    CertificateInfo info;
    info.original = &ast;
    info.polynomial = &res.system;
    info.mode = "polynomial";
    info.report = report;
    std::ostringstream human;
    human << "order " << res.system.lifted.size() << '\n'
          << "lifting:\n"
          << describe_lifting(res.system) << "system:\n"
          << res.system.render() << report.to_string();
    emit(opt, info, human.str());
    return report.symbolic_ok ? kOk : kError;
}

int finish_search(const Options &opt, const SystemAST &ast, const PolySystem &base, const SearchResult &res)
{
    if (res.status == SearchStatus::NoneUpToOrder || !res.certificate) {
        std::cout << "no quadratization up to order " << res.max_order << " (NoneUpToOrder(" << res.max_order
                  << "))\n"
                  << "nodes expanded: " << res.stats.nodes_expanded << '\n';
        return kNone;
    }
    QuadCertificate cert = opt.no_redundancy ? *res.certificate : linear_redundancy_pass(base, *res.certificate);
    const VerificationReport report = verify_certificate(ast, cert.system, numeric_check(opt, ast));
    const bool reduced = cert.order() < res.certificate->order();
    const bool optimal = res.optimal && res.status == SearchStatus::Found;

    CertificateInfo info;
    info.original = &ast;
    info.polynomial = &base;
    info.quad = &cert;
    info.search = &res;
    info.mode = mode_name(opt, base);
    info.optimal = optimal;
    info.report = report;

    std::ostringstream human;
    const auto base_names = base.names();
    human << "order " << cert.order() << " (" << base.lifted.size() << " from polynomialization, "
          << cert.generators.size() << " monomial)" << (optimal ? ", optimal" : ", not proven optimal") << '\n';
    human << "generators:";
    for (const auto &g : cert.generators) {
        human << ' ' << render_monomial(g, base_names);
    }
    human << "\nlifting:\n" << describe_lifting(cert.system);
    if (reduced) {
        human << "eliminated:\n";
        for (const auto &e : cert.eliminations) {
            human << "  " << e.name << " = " << e.replacement << '\n';
        }
    }
    human << "system:\n" << cert.system.render();
    human << "nodes expanded: " << res.stats.nodes_expanded << ", generated: " << res.stats.nodes_generated << '\n';
    human << report.to_string();
    emit(opt, info, human.str());
    if (!report.symbolic_ok) {
        return kError;
    }
    return optimal ? kOk : kNotOptimal;
}

SearchResult search(const Options &opt, const PolySystem &base)
{
    SearchConfig cfg;
    cfg.max_order = opt.max_order;
    cfg.laurent = opt.laurent;
    cfg.input_free = opt.input_free;
    cfg.workers = opt.workers;
    cfg.time_budget_seconds = opt.time_budget;
    cfg.max_nodes = opt.max_nodes;
    return base.inputs.empty() ? search_optimal_monomial(base, cfg) : search_with_inputs(base, cfg);
}

int run_quadratize(const Options &opt)
{
    SystemAST ast = load_system(opt.input);
    if (!verify_polynomial(ast)) {
        throw Error(opt.input + ": right-hand sides are not polynomial; use the pipeline subcommand");
    }
    const PolySystem base = to_poly_system(ast);
    return finish_search(opt, ast, base, search(opt, base));
}

int run_pipeline(const Options &opt)
{
    SystemAST ast = load_system(opt.input);
    const SystemAST prepared = opt.no_gcd ? ast : exp_gcd_heuristic(ast);
    const PolynomializeResult poly = polynomialize(prepared);
    return finish_search(opt, ast, poly.system, search(opt, poly.system));
}

int run_verify(const Options &opt)
{
    const LoadedCertificate cert = certificate_from_json(read_file(opt.input));
    VerificationReport report = verify_certificate(cert.original, cert.system, numeric_check(opt, cert.original));
    bool ok = report.symbolic_ok;
    if (cert.mode != "polynomial") {
        for (std::size_t i = 0; i < cert.system.dynamic_count(); ++i) {
            if (cert.system.rhs[i].degrees().total > 2) {
                std::cout << "row " << cert.system.name(i) << " is not quadratic\n";
                ok = false;
            }
        }
    }
    std::cout << "mode: " << cert.mode << ", order " << cert.system.lifted.size() << '\n' << report.to_string();
    return ok ? kOk : kError;
}

int run_simulate(const Options &opt)
{
    SystemAST ast = load_system(opt.input);
    const SimulationSetup setup = make_setup(opt, ast.parameters);
    Trajectory traj;
    if (opt.lifted) {
        const SystemAST prepared = opt.no_gcd ? ast : exp_gcd_heuristic(ast);
        const PolynomializeResult poly = polynomialize(prepared);
        traj = simulate_rk4(poly.system, lifted_initial_state(poly.system, ast.states, opt.x0, setup), setup);
    } else {
        traj = simulate_rk4(ast, opt.x0, setup);
    }
    if (opt.out.empty()) {
        write_csv(std::cout, traj);
    } else {
        std::ofstream os(opt.out);
        if (!os) {
            throw Error("cannot write '" + opt.out + "'");
        }
        write_csv(os, traj);
    }
    return kOk;
}

int run_subsystem(const Options &opt)
{
    const LoadedCertificate cert = certificate_from_json(read_file(opt.input));
    const std::set<std::string> seeds(opt.seeds.begin(), opt.seeds.end());
    const PolySystem sub = extract_closed_subsystem(cert.system, seeds);
    std::cout << "closed subsystem with " << sub.dynamic_count() << " variables\n" << sub.render();
    return kOk;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Polynomialization and quadratization of ODE systems"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App *sub, bool search_flags) {
        sub->set_help_flag("--help", "Print this help message and exit");
        sub->add_option("file", opt.input, "Input file")->required();
        sub->add_flag("--json", opt.json, "Write the certificate to <input>.cert.json");
        sub->add_option("--out", opt.out, "Output path (overrides the default file name)");
        sub->add_option("--params", opt.params, "Parameter values name=value");
        sub->add_option("--x0", opt.x0, "Initial state for numeric checks")->delimiter(',');
        sub->add_option("--h", opt.h, "RK4 step");
        sub->add_option("--t-end", opt.t_end, "Simulation horizon");
        sub->add_option("--input", opt.input_fns, "Input function name=expression in t");
        sub->add_flag("--no-gcd-heuristic", opt.no_gcd, "Do not merge exponential families");
        if (search_flags) {
            sub->add_flag("--laurent", opt.laurent, "Allow negative exponents in new variables");
            sub->add_flag("--input-free", opt.input_free, "New variables may not depend on inputs");
            sub->add_option("--max-order", opt.max_order, "Largest order to search");
            sub->add_option("--workers", opt.workers, "Search threads")->check(CLI::PositiveNumber);
            sub->add_option("--seed", opt.seed, "Accepted for reproducible scripts; the search is deterministic");
            sub->add_option("--time-budget", opt.time_budget, "Search time budget in seconds");
            sub->add_option("--max-nodes", opt.max_nodes, "Search node budget");
            sub->add_flag("--no-redundancy", opt.no_redundancy, "Skip the elimination pass");
        }
    };

    auto *poly = app.add_subcommand("polynomialize", "Introduce variables until the system is polynomial");
    add_common(poly, false);
    auto *quad = app.add_subcommand("quadratize", "Find a monomial quadratization of a polynomial system");
    add_common(quad, true);
    auto *pipe = app.add_subcommand("pipeline", "Polynomialize, quadratize and verify");
    add_common(pipe, true);
    auto *ver = app.add_subcommand("verify", "Re-verify a certificate file");
    add_common(ver, false);
    auto *sim = app.add_subcommand("simulate", "Integrate a system with RK4 and print CSV");
    add_common(sim, false);
    sim->add_flag("--lifted", opt.lifted, "Simulate the polynomialized system instead");
    auto *subs = app.add_subcommand("subsystem", "Extract a closed subsystem from a certificate file");
    subs->add_option("file", opt.input, "Certificate file")->required();
    subs->add_option("--seeds", opt.seeds, "Seed variables")->delimiter(',')->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e) == 0 ? kOk : kError;
    }

    try {
        if (*poly) {
            return run_polynomialize(opt);
        }
        if (*quad) {
            return run_quadratize(opt);
        }
        if (*pipe) {
            return run_pipeline(opt);
        }
        if (*ver) {
            return run_verify(opt);
        }
        if (*sim) {
            if (opt.x0.empty()) {
                throw Error("simulate requires --x0");
            }
            return run_simulate(opt);
        }
        if (*subs) {
            return run_subsystem(opt);
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kError;
    }
    return kError;
}
