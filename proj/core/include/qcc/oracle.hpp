#pragma once

#include <Eigen/Dense>
#include <functional>

#include "qcc/generators.hpp"

namespace qcc::oracle {

// Dense brute-force reference implementations. Everything here favors
// clarity over speed and is meant for tests and the `exact` CLI subcommand;
// sizes are guarded by explicit qubit caps.

/// 2^n x 2^n complex matrix of a Pauli word (n <= cap).
Eigen::MatrixXcd dense_matrix(const PauliWord& w, std::uint32_t n_cap = 14);

/// Dense matrix of a whole operator.
Eigen::MatrixXcd dense_matrix(const QubitOperator& op, std::uint32_t n_cap = 14);

/// Exact ansatz state: applies each exponential factor right-to-left as a
/// dense linear map.
Eigen::VectorXcd dense_state(std::span<const PauliWord> generators, std::span<const double> t,
                             const BasisState& reference, std::uint32_t n_cap = 14);

/// Exact ansatz energy <U 0|H|U 0>.
double dense_energy(const QubitOperator& h, std::span<const PauliWord> generators,
                    std::span<const double> t, const BasisState& reference,
                    std::uint32_t n_cap = 14);

/// Exact amplitude gradient, each component from the derivative-factor
/// state (no finite differences).
std::vector<double> dense_gradient(const QubitOperator& h, std::span<const PauliWord> generators,
                                   std::span<const double> t, const BasisState& reference,
                                   std::uint32_t n_cap = 14);

struct GroundState {
    double energy = 0.0;
    Eigen::VectorXcd vector;
};

/// Full dense Hermitian diagonalization; lowest eigenpair.
GroundState dense_ground(const QubitOperator& h, std::uint32_t n_cap = 12);

/// Central finite differences of an arbitrary scalar function.
std::vector<double> fd_gradient(const std::function<double(std::span<const double>)>& f,
                                std::span<const double> t, double h_step);

}  // namespace qcc::oracle
