#pragma once

#include <cstdint>
#include <vector>

#include "qcc/qubit_operator.hpp"

namespace qcc {

/// An ordered list of ansatz generator candidates with their first
/// derivatives, flipped-state diagonal energies and (once ranked) ranking
/// values. Generators are pairwise distinct by their pure-x factor, so each
/// corresponds to a distinct flipped reference state.
struct GeneratorPool {
    std::vector<PauliWord> generators;
    std::vector<double> grads;          // g_k
    std::vector<double> diag_energies;  // E_k
    std::vector<double> rankings;       // r_k, non-increasing once ranked
    BasisState reference;
    double e0 = 0.0;                    // <ref|H|ref>
    bool ranked = false;

    std::size_t size() const { return generators.size(); }
    double max_ranking() const;
};

/// First derivative of the ansatz energy for one generator at zero
/// amplitude, computed from a single operator matrix element.
double gradient(const QubitOperator& h, const PauliWord& t_word, const BasisState& reference);

/// Diagonal energy <w|H|w> of the flipped state w = reference XOR x(t_word).
double diag_energy(const QubitOperator& h, const PauliWord& t_word, const BasisState& reference);

/// One canonical generator per distinct non-identity x_mask of h: a y on
/// the lowest set flip bit and x elsewhere. Gradients and diagonal energies
/// are filled in; the pool is not yet ranked.
GeneratorPool propose_generators(const QubitOperator& h, const BasisState& reference);

enum class RankingMode {
    gradient_ratio,  // |arctan(2g/D)|, D = e0 - E_k
    dha_amplitude,   // |t_k| from the diagonal-Hessian solution
};

/// Ranks and reorders the pool by non-increasing ranking value. Rankings
/// equal after rounding to 1e-11 form a degenerate group and are ordered
/// among themselves by ascending binary value of their x factor.
GeneratorPool rank(const GeneratorPool& pool, RankingMode mode = RankingMode::gradient_ratio);

enum class SelectPolicy { extend, shrink };

/// Top-m generators of a ranked pool. A cut through a degenerate group
/// moves to the nearest group boundary per the policy, so the returned size
/// may differ from m.
GeneratorPool select(const GeneratorPool& pool, std::size_t m,
                     SelectPolicy policy = SelectPolicy::extend);

/// Result of the diagonal-Hessian (arrowhead) eigenproblem.
struct DHASolution {
    double energy = 0.0;           // lowest eigenvalue of the arrowhead matrix
    std::vector<double> c;         // C_k = g_k / (energy - E_k), C_0 = 1 implied
    std::vector<double> t;         // t_k = 2 arctan(C_k), in (-pi, pi)
    std::size_t iterations = 0;
};

/// Lowest eigenvalue of the (M+1)x(M+1) arrowhead matrix with diagonal
/// (e0, E_1..E_M) and couplings g_k, found from the secular equation by a
/// bisection-safeguarded Newton iteration below min(e0, min E_k). The
/// eigenvector is normalized to a unit reference component. Throws
/// ConvergenceError if tol is not reached within the iteration cap.
DHASolution dha_solve(const GeneratorPool& pool, double tol = 1e-12);

}  // namespace qcc
