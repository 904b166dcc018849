#include "qcc/truncated.hpp"

#include <chrono>

#include "qcc/errors.hpp"

namespace qcc {

SparseState truncated_state(std::span<const PauliWord> generators, std::span<const double> t,
                            const BasisState& reference, std::size_t cap) {
    if (generators.size() != t.size())
        throw ContractError("generator and amplitude counts differ");
    if (cap < 1)
        throw ContractError("expansion cap must be at least 1");
    SparseState state = SparseState::reference(reference.n_qubits(), reference);
    for (std::size_t k = generators.size(); k-- > 0;)
        state = apply_generator_exponential(state, generators[k], t[k], cap);
    return state;
}

TruncatedValue evaluate_truncated(const QubitOperator& h, std::span<const PauliWord> generators,
                                  std::span<const double> t, const BasisState& reference,
                                  std::size_t cap) {
    const SparseState state = truncated_state(generators, t, reference, cap);
    return {expectation(h, state), state.size(), state.norm_loss_log()};
}

TruncatedValue evaluate_truncated(const QubitOperator& h, const GeneratorPool& pool,
                                  std::span<const double> t, std::size_t cap) {
    return evaluate_truncated(h, pool.generators, t, pool.reference, cap);
}

std::vector<SweepRow> sweep_truncated(const QubitOperator& h, const GeneratorPool& pool,
                                      std::span<const double> t,
                                      std::span<const std::size_t> caps) {
    std::vector<SweepRow> rows;
    rows.reserve(caps.size());
    for (std::size_t cap : caps) {
        const auto start = std::chrono::steady_clock::now();
        TruncatedValue v = evaluate_truncated(h, pool, t, cap);
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        double retained_sq = 1.0;
        for (double lambda : v.norm_loss)
            retained_sq *= lambda * lambda;
        rows.push_back({cap, v.energy, v.final_dim, 1.0 - retained_sq, elapsed.count()});
    }
    return rows;
}

}  // namespace qcc
