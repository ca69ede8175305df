#include <quadlift/simulate.hpp>

#include <quadlift/errors.hpp>

#include <cmath>
#include <functional>
#include <iomanip>
#include <ostream>
#include <set>

namespace quadlift {

namespace {

using Field = std::function<void(double, const std::vector<double> &, std::vector<double> &)>;

void check_step(double t_end, double h)
{
    if (!(h > 0) || !std::isfinite(h)) {
        throw SimulationError(SimulationError::Kind::InvalidStep, "step size must be positive");
    }
    if (!(t_end >= h)) {
        throw SimulationError(SimulationError::Kind::InvalidStep, "t_end must be at least one step");
    }
}

void check_parameters(const std::vector<std::string> &params, const Env &env)
{
    for (const auto &p : params) {
        if (env.find(p) == env.end()) {
            throw SimulationError(SimulationError::Kind::MissingParameter, "no value for parameter '" + p + "'");
        }
    }
}

Trajectory integrate(const Field &f, std::vector<std::string> names, std::vector<double> x, double t_end, double h)
{
    Trajectory traj;
    traj.names = std::move(names);
    const std::size_t n = x.size();
    const auto steps = static_cast<std::size_t>(std::ceil(t_end / h - 1e-9));
    traj.times.reserve(steps + 1);
    traj.values.reserve(steps + 1);
    traj.times.push_back(0.0);
    traj.values.push_back(x);
    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
    double t = 0.0;
    for (std::size_t s = 1; s <= steps; ++s) {
        const double t_next = s == steps ? t_end : static_cast<double>(s) * h;
        const double dt = t_next - t;
        f(t, x, k1);
        for (std::size_t i = 0; i < n; ++i) {
            tmp[i] = x[i] + 0.5 * dt * k1[i];
        }
        f(t + 0.5 * dt, tmp, k2);
        for (std::size_t i = 0; i < n; ++i) {
            tmp[i] = x[i] + 0.5 * dt * k2[i];
        }
        f(t + 0.5 * dt, tmp, k3);
        for (std::size_t i = 0; i < n; ++i) {
            tmp[i] = x[i] + dt * k3[i];
        }
        f(t + dt, tmp, k4);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += dt / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
            if (!std::isfinite(x[i])) {
                throw SimulationError(SimulationError::Kind::NonFiniteState,
                                      "state '" + traj.names[i] + "' is not finite at t = " + std::to_string(t_next));
            }
        }
        t = t_next;
        traj.times.push_back(t);
        traj.values.push_back(x);
    }
    return traj;
}

struct InputEval {
    std::vector<std::string> names;
    std::vector<Expr> value;
    std::vector<Expr> derivative;

    InputEval(const std::vector<std::string> &inputs, const InputFunctions &fns)
    {
        for (const auto &u : inputs) {
            auto it = fns.find(u);
            if (it == fns.end()) {
                throw SimulationError(SimulationError::Kind::DimensionMismatch,
                                      "no time function given for input '" + u + "'");
            }
            names.push_back(u);
            value.push_back(it->second);
            derivative.push_back(diff(it->second, "t"));
        }
    }

    void bind(double t, Env &env) const
    {
        env["t"] = t;
        for (std::size_t j = 0; j < names.size(); ++j) {
            env[names[j]] = evaluate(value[j], env);
            env[derivative_name(names[j])] = evaluate(derivative[j], env);
        }
    }
};

} // namespace

std::vector<double> Trajectory::column(const std::string &name) const
{
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) {
            std::vector<double> out;
            out.reserve(values.size());
            for (const auto &row : values) {
                out.push_back(row[i]);
            }
            return out;
        }
    }
    throw std::out_of_range("trajectory has no variable '" + name + "'");
}

Expr time_symbol()
{
    return Expr::variable("t", 0);
}

Expr parse_time_function(std::string_view text, const std::vector<std::string> &parameters)
{
    SymbolTable table;
    table.symbols.emplace("t", time_symbol());
    for (const auto &p : parameters) {
        table.symbols.emplace(p, Expr::parameter(p));
    }
    return parse_expression(text, table);
}

Trajectory simulate_rk4(const SystemAST &sys, const std::vector<double> &x0, const SimulationSetup &setup)
{
    check_step(setup.t_end, setup.h);
    if (x0.size() != sys.states.size()) {
        throw SimulationError(SimulationError::Kind::DimensionMismatch, "initial state has the wrong dimension");
    }
    check_parameters(sys.parameters, setup.parameters);
    const InputEval inputs(sys.inputs, setup.inputs);
    std::vector<Expr> rhs;
    for (const auto &s : sys.states) {
        rhs.push_back(sys.rhs(s));
    }
    Env env = setup.parameters;
    Field f = [&](double t, const std::vector<double> &x, std::vector<double> &dx) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            env[sys.states[i]] = x[i];
        }
        inputs.bind(t, env);
        for (std::size_t i = 0; i < rhs.size(); ++i) {
            dx[i] = evaluate(rhs[i], env);
        }
    };
    return integrate(f, sys.states, x0, setup.t_end, setup.h);
}

Trajectory simulate_rk4(const PolySystem &sys, const std::vector<double> &x0, const SimulationSetup &setup)
{
    check_step(setup.t_end, setup.h);
    const std::size_t nd = sys.dynamic_count();
    if (x0.size() != nd) {
        throw SimulationError(SimulationError::Kind::DimensionMismatch, "initial state has the wrong dimension");
    }
    check_parameters(sys.parameters, setup.parameters);
    const InputEval inputs(sys.inputs, setup.inputs);
    const std::size_t ni = sys.inputs.size();
    std::vector<double> point(sys.nvars(), 0.0);
    Env env = setup.parameters;
    Field f = [&](double t, const std::vector<double> &x, std::vector<double> &dx) {
        std::copy(x.begin(), x.end(), point.begin());
        if (ni > 0) {
            inputs.bind(t, env);
            for (std::size_t j = 0; j < ni; ++j) {
                point[nd + j] = env[sys.inputs[j]];
                point[nd + ni + j] = env[derivative_name(sys.inputs[j])];
            }
        }
        for (std::size_t i = 0; i < nd; ++i) {
            dx[i] = sys.rhs[i].evaluate(point, setup.parameters);
        }
    };
    std::vector<std::string> names = sys.names();
    names.resize(nd);
    return integrate(f, std::move(names), x0, setup.t_end, setup.h);
}

std::vector<double> lifted_initial_state(const PolySystem &sys, const std::vector<std::string> &original_states,
                                         const std::vector<double> &x0, const SimulationSetup &setup)
{
    if (x0.size() != original_states.size()) {
        throw SimulationError(SimulationError::Kind::DimensionMismatch, "initial state has the wrong dimension");
    }
    Env env = setup.parameters;
    for (std::size_t i = 0; i < x0.size(); ++i) {
        env[original_states[i]] = x0[i];
    }
    const InputEval inputs(sys.inputs, setup.inputs);
    inputs.bind(0.0, env);
    std::vector<double> out;
    for (std::size_t i = 0; i < sys.dynamic_count(); ++i) {
        out.push_back(evaluate(sys.definition(i), env));
    }
    return out;
}

double check_reconstruction(const Trajectory &lifted, const Expr &formula, const Trajectory &reference,
                            const std::string &var, const Env &parameters)
{
    if (lifted.times.size() != reference.times.size()) {
        throw SimulationError(SimulationError::Kind::DimensionMismatch, "trajectories do not share a grid");
    }
    const auto ref = reference.column(var);
    Env env = parameters;
    double worst = 0.0;
    for (std::size_t k = 0; k < lifted.times.size(); ++k) {
        if (std::abs(lifted.times[k] - reference.times[k]) > 1e-12) {
            throw SimulationError(SimulationError::Kind::DimensionMismatch, "trajectories do not share a grid");
        }
        env["t"] = lifted.times[k];
        for (std::size_t i = 0; i < lifted.names.size(); ++i) {
            env[lifted.names[i]] = lifted.values[k][i];
        }
        const double v = evaluate(formula, env);
        if (!std::isfinite(v)) {
            throw DomainError("reconstruction formula is not finite at t = " + std::to_string(lifted.times[k]));
        }
        worst = std::max(worst, std::abs(v - ref[k]));
    }
    return worst;
}

void write_csv(std::ostream &os, const Trajectory &traj)
{
    os << 't';
    for (const auto &n : traj.names) {
        os << ',' << n;
    }
    os << '\n';
    const auto old = os.precision(17);
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        os << traj.times[k];
        for (double v : traj.values[k]) {
            os << ',' << v;
        }
        os << '\n';
    }
    os.precision(old);
}

} // namespace quadlift
