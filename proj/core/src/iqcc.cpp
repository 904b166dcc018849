#include "qcc/iqcc.hpp"

#include <cassert>
#include <chrono>
#include <cmath>

#include "qcc/errors.hpp"

namespace qcc {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::map<std::string, double> reference_expectations(
    const std::map<std::string, QubitOperator>& observables, const BasisState& reference) {
    std::map<std::string, double> out;
    for (const auto& [name, op] : observables)
        out[name] = matrix_element(op, reference, reference);
    return out;
}

GeneratorPool make_pool(const QubitOperator& h, const BasisState& reference) {
    if (h.empty())
        return GeneratorPool{.generators = {},
                             .grads = {},
                             .diag_energies = {},
                             .rankings = {},
                             .reference = reference,
                             .e0 = 0.0,
                             .ranked = true};
    return rank(propose_generators(h, reference));
}

}  // namespace

IqccTrace run_iqcc(const QubitOperator& h0, const BasisState& reference,
                   const IqccSchedule& schedule,
                   const std::map<std::string, QubitOperator>& observables,
                   const IqccOptions& options) {
    if (h0.empty())
        throw ContractError("initial Hamiltonian has no terms");
    if (h0.n_qubits() != reference.n_qubits())
        throw DimensionError("reference width does not match Hamiltonian");
    const std::size_t total = schedule.total_iterations();
    if (total > 0 && schedule.iterations.empty())
        throw ContractError("schedule has max_iterations > 0 but no iteration entries");
    for (const IterationSpec& spec : schedule.iterations) {
        if (spec.generators < 1)
            throw ContractError("schedule entries need at least one generator");
        if (spec.order > spec.generators)
            throw ContractError("schedule order exceeds its generator count");
        if (spec.drop_threshold < 0)
            throw ContractError("drop threshold must be non-negative");
    }

    IqccTrace trace;
    QubitOperator h = h0;
    std::map<std::string, QubitOperator> obs = observables;

    auto start = Clock::now();
    GeneratorPool pool = make_pool(h, reference);

    IqccRecord row;
    row.iteration = 0;
    row.energy = matrix_element(h, reference, reference);
    row.e_opt = row.energy;
    row.max_ranking = pool.max_ranking();
    row.hamiltonian_terms = h.size();
    row.observable_expectations = reference_expectations(obs, reference);
    row.wall_seconds = seconds_since(start);
    trace.records.push_back(row);
    if (options.on_iteration)
        options.on_iteration(trace.records.back());

    for (std::size_t iter = 1; iter <= total; ++iter) {
        if (pool.size() == 0 || pool.max_ranking() == 0.0) {
            trace.stop_reason = "converged: no gradients";
            return trace;
        }
        start = Clock::now();
        const IterationSpec& spec = schedule.at(iter - 1);
        const double pool_max_ranking = pool.max_ranking();

        GeneratorPool selected = select(pool, spec.generators, options.policy);
        const std::size_t m_used = selected.size();
        // An exact entry (order == generators) stays exact when degeneracy
        // widens the selection.
        const std::uint32_t k_used =
            spec.order >= spec.generators
                ? static_cast<std::uint32_t>(m_used)
                : static_cast<std::uint32_t>(std::min<std::size_t>(spec.order, m_used));

        const CompiledAnsatz ansatz = CompiledAnsatz::compile(h, selected, k_used,
                                                              options.term_cap);
        const auto objective = [&](std::span<const double> t, std::span<double> grad) {
            return ansatz.evaluate(t, grad).energy;
        };
        const MinimizeResult res =
            minimize(objective, std::vector<double>(m_used, 0.0), options.minimize);

        h = dress(h, selected.generators, res.t_opt);
        const double energy = matrix_element(h, reference, reference);
        for (auto& [name, op] : obs)
            op = dress(op, selected.generators, res.t_opt);

        IqccRecord rec;
        rec.iteration = iter;
        rec.energy = energy;
        rec.e_opt = res.e_opt;
        rec.max_ranking = pool_max_ranking;
        rec.m_used = m_used;
        rec.k_used = k_used;
        rec.observable_expectations = reference_expectations(obs, reference);

        if (k_used == m_used) {
            // The dressed reference energy and the exact-order optimum are
            // the same number; drift signals an ordering bug.
            assert(std::fabs(energy - res.e_opt) <=
                   1e-9 * std::max(1.0, std::fabs(res.e_opt)));
        }

        CompressResult compressed = compress(h, spec.drop_threshold);
        h = std::move(compressed.op);
        rec.dropped_l1 = compressed.removed_l1;
        for (auto& [name, op] : obs)
            op = compress(op, spec.drop_threshold).op;
        rec.hamiltonian_terms = h.size();
        if (options.snapshot)
            options.snapshot(iter, h);

        pool = make_pool(h, reference);
        rec.wall_seconds = seconds_since(start);
        trace.records.push_back(rec);
        if (options.on_iteration)
            options.on_iteration(trace.records.back());

        const double previous = trace.records[trace.records.size() - 2].energy;
        if (schedule.energy_tol > 0 && previous - energy < schedule.energy_tol) {
            trace.stop_reason = "converged: energy improvement below tolerance";
            return trace;
        }
    }
    trace.stop_reason = total == 0 ? "schedule empty" : "schedule exhausted";
    return trace;
}

}  // namespace qcc
