#pragma once

#include <vector>

#include "qcc/generators.hpp"
#include "qcc/sparse_state.hpp"

namespace qcc {

/// Energy of the ansatz state built with the expansion dimension capped at
/// `cap` basis states. Exact (equal to the dense ansatz energy) whenever no
/// truncation fires.
struct TruncatedValue {
    double energy = 0.0;
    std::size_t final_dim = 0;
    std::vector<double> norm_loss;  // one renormalization factor per truncation
};

/// Builds the state by applying the generator exponentials right-to-left
/// (k = M down to 1) with per-step truncation, then takes the operator
/// expectation row-streamed.
TruncatedValue evaluate_truncated(const QubitOperator& h, std::span<const PauliWord> generators,
                                  std::span<const double> t, const BasisState& reference,
                                  std::size_t cap);
TruncatedValue evaluate_truncated(const QubitOperator& h, const GeneratorPool& pool,
                                  std::span<const double> t, std::size_t cap);

struct SweepRow {
    std::size_t cap = 0;
    double energy = 0.0;
    std::size_t final_dim = 0;
    double cumulative_norm_loss = 0.0;  // 1 - prod(lambda^2), 0 when exact
    double seconds = 0.0;
};

/// One evaluate_truncated per cap (nothing is shared between caps; each
/// truncation path differs), with wall-clock timing per row.
std::vector<SweepRow> sweep_truncated(const QubitOperator& h, const GeneratorPool& pool,
                                      std::span<const double> t,
                                      std::span<const std::size_t> caps);

/// Final ansatz state itself (for dumps and diagnostics).
SparseState truncated_state(std::span<const PauliWord> generators, std::span<const double> t,
                            const BasisState& reference, std::size_t cap);

}  // namespace qcc
