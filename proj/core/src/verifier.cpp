#include <quadlift/verifier.hpp>

#include <quadlift/errors.hpp>
#include <quadlift/normal_form.hpp>

#include <cmath>
#include <sstream>

namespace quadlift {

Expr time_derivative(const Expr &e, const SystemAST &original)
{
    std::vector<Expr> terms;
    for (std::size_t i = 0; i < original.states.size(); ++i) {
        const Expr d = diff(e, original.states[i]);
        if (!(d.kind() == Kind::Constant && d.value() == 0)) {
            terms.push_back(d * original.rhs(original.states[i]));
        }
    }
    for (std::size_t j = 0; j < original.inputs.size(); ++j) {
        const Expr d = diff(e, original.inputs[j]);
        if (!(d.kind() == Kind::Constant && d.value() == 0)) {
            terms.push_back(d * original.input_derivative_symbol(j));
        }
    }
    return sum(std::move(terms));
}

VerificationReport verify_certificate(const SystemAST &original, const PolySystem &lifted,
                                      const std::optional<NumericCheck> &numeric)
{
    VerificationReport report;
    std::vector<Expr> defs;
    for (std::size_t i = 0; i < lifted.nvars(); ++i) {
        defs.push_back(lifted.definition(i));
    }
    report.symbolic_ok = true;
    for (std::size_t i = 0; i < lifted.dynamic_count(); ++i) {
        RowResidual row;
        row.variable = lifted.name(i);
        Expr lhs;
        if (lifted.role(i) == VarRole::State) {
            if (original.equations.count(row.variable) == 0) {
                row.residual = "no equation for '" + row.variable + "' in the original system";
                report.residuals.push_back(row);
                report.symbolic_ok = false;
                continue;
            }
            lhs = original.rhs(row.variable);
        } else {
            lhs = time_derivative(defs[i], original);
        }
        const Expr residual = lhs - lifted.rhs.at(i).to_expr(defs);
        row.zero = is_identically_zero(residual);
        row.residual = row.zero ? "0" : normal_form_string(residual);
        report.symbolic_ok = report.symbolic_ok && row.zero;
        report.residuals.push_back(std::move(row));
    }

    if (numeric) {
        const Trajectory ref = simulate_rk4(original, numeric->x0, numeric->setup);
        const auto y0 = lifted_initial_state(lifted, original.states, numeric->x0, numeric->setup);
        const Trajectory traj = simulate_rk4(lifted, y0, numeric->setup);
        Env env = numeric->setup.parameters;
        std::vector<Expr> inputs;
        std::vector<Expr> input_rates;
        for (const auto &u : original.inputs) {
            inputs.push_back(numeric->setup.inputs.at(u));
            input_rates.push_back(diff(inputs.back(), "t"));
        }
        for (std::size_t i = 0; i < lifted.dynamic_count(); ++i) {
            report.numeric_max_error[lifted.name(i)] = 0.0;
        }
        for (std::size_t k = 0; k < ref.times.size(); ++k) {
            env["t"] = ref.times[k];
            for (std::size_t s = 0; s < original.states.size(); ++s) {
                env[original.states[s]] = ref.values[k][s];
            }
            for (std::size_t j = 0; j < inputs.size(); ++j) {
                env[original.inputs[j]] = evaluate(inputs[j], env);
                env[derivative_name(original.inputs[j])] = evaluate(input_rates[j], env);
            }
            for (std::size_t i = 0; i < lifted.dynamic_count(); ++i) {
                const double expected = evaluate(defs[i], env);
                double &worst = report.numeric_max_error[lifted.name(i)];
                worst = std::max(worst, std::abs(traj.values[k][i] - expected));
            }
        }
    }
    return report;
}

std::string VerificationReport::to_string() const
{
    std::ostringstream os;
    os << "symbolic: " << (symbolic_ok ? "ok" : "FAILED") << '\n';
    for (const auto &r : residuals) {
        os << "  " << r.variable << "': " << (r.zero ? "ok" : "residual " + r.residual) << '\n';
    }
    if (!numeric_max_error.empty()) {
        os << "numeric max error:\n";
        os.precision(3);
        for (const auto &[name, err] : numeric_max_error) {
            os << "  " << name << ": " << std::scientific << err << '\n';
        }
    }
    if (reconstruction_error) {
        os << "reconstruction error: " << std::scientific << *reconstruction_error << '\n';
    }
    return os.str();
}

} // namespace quadlift
