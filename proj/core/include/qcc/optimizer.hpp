#pragma once

#include <functional>
#include <span>
#include <vector>

namespace qcc {

/// Objective contract: writes the gradient at t into grad (same length as t)
/// and returns the energy.
using EnergyGradient = std::function<double(std::span<const double>, std::span<double>)>;

struct MinimizeOptions {
    double grad_tol = 1e-8;   // converged when ||grad||_inf < grad_tol
    double step_tol = 1e-12;  // ... or the accepted step falls below step_tol
    std::size_t max_evals = 0;  // 0 -> 10 * dim + 200
    std::size_t history = 10;   // quasi-Newton memory
    /// Called once per objective evaluation: (index, energy, ||grad||_inf).
    std::function<void(std::size_t, double, double)> progress;
};

struct MinimizeResult {
    std::vector<double> t_opt;  // best-seen point, wrapped to (-pi, pi]
    double e_opt = 0.0;
    std::size_t evals = 0;
    bool converged = false;
};

/// Limited-memory quasi-Newton minimization with a strong-Wolfe line search.
/// Deterministic given (t0, opts); returns the best point seen across all
/// evaluations. Throws NumericalError if the objective turns non-finite.
MinimizeResult minimize(const EnergyGradient& objective, std::vector<double> t0,
                        const MinimizeOptions& opts = {});

/// Maps each amplitude into (-pi, pi]; every ansatz factor is 2*pi-periodic
/// up to a global sign, so energies are unchanged.
void wrap_amplitudes(std::span<double> t);

}  // namespace qcc
