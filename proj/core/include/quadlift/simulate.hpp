#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <quadlift/parser.hpp>
#include <quadlift/poly.hpp>

namespace quadlift {

struct Trajectory {
    std::vector<std::string> names;
    std::vector<double> times;
    /// values[k] is the state at times[k], ordered like `names`.
    std::vector<std::vector<double>> values;

    std::vector<double> column(const std::string &name) const;
};

/// Input name -> closed-form expression in `t`.
using InputFunctions = std::map<std::string, Expr>;

/// The time symbol used in input expressions.
Expr time_symbol();

/// Parses an input expression over `t` and the given parameters.
Expr parse_time_function(std::string_view text, const std::vector<std::string> &parameters);

struct SimulationSetup {
    Env parameters;
    InputFunctions inputs;
    double t_end = 1.0;
    double h = 1e-3;
};

/// Classical fixed-step RK4; the last step is shortened to land on t_end.
/// Throws SimulationError.
Trajectory simulate_rk4(const SystemAST &sys, const std::vector<double> &x0, const SimulationSetup &setup);
/// x0 covers the states and lifted variables of `sys`.
Trajectory simulate_rk4(const PolySystem &sys, const std::vector<double> &x0, const SimulationSetup &setup);

/// Initial values of all dynamic variables of `sys` obtained by evaluating
/// the definitions at the original initial state (inputs at t = 0).
std::vector<double> lifted_initial_state(const PolySystem &sys, const std::vector<std::string> &original_states,
                                         const std::vector<double> &x0, const SimulationSetup &setup);

/// Max |formula(lifted) - reference[var]| over the shared grid. Throws
/// DomainError when the formula is singular along the trajectory.
double check_reconstruction(const Trajectory &lifted, const Expr &formula, const Trajectory &reference,
                            const std::string &var, const Env &parameters);

/// CSV with header `t,<var>,...` and 17 significant digits.
void write_csv(std::ostream &os, const Trajectory &traj);

} // namespace quadlift
