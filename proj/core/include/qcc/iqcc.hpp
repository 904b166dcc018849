#pragma once

#include <map>
#include <string>
#include <vector>

#include "qcc/optimizer.hpp"
#include "qcc/sympoly.hpp"

namespace qcc {

struct IterationSpec {
    std::size_t generators = 1;     // m, before degeneracy adjustment
    std::uint32_t order = 1;        // k <= m
    double drop_threshold = 5e-7;   // post-dressing compression
};

struct IqccSchedule {
    std::vector<IterationSpec> iterations;
    /// 0 means exactly iterations.size() rounds; a larger value repeats the
    /// last entry.
    std::size_t max_iterations = 0;
    /// Stop once the per-iteration energy improvement falls below this;
    /// 0 disables early stopping.
    double energy_tol = 0.0;

    std::size_t total_iterations() const {
        return max_iterations == 0 ? iterations.size() : max_iterations;
    }
    const IterationSpec& at(std::size_t i) const {
        return iterations[std::min(i, iterations.size() - 1)];
    }
};

struct IqccRecord {
    std::size_t iteration = 0;      // 0 is the undressed starting point
    double energy = 0.0;            // <ref|H^(i)|ref>
    double e_opt = 0.0;             // optimizer energy of this round
    double max_ranking = 0.0;       // top ranking value of this round's pool
    std::size_t hamiltonian_terms = 0;
    std::size_t m_used = 0;         // after degeneracy adjustment
    std::uint32_t k_used = 0;
    double dropped_l1 = 0.0;        // compression weight removed this round
    std::map<std::string, double> observable_expectations;
    double wall_seconds = 0.0;
};

struct IqccTrace {
    std::vector<IqccRecord> records;
    std::string stop_reason;

    double final_energy() const { return records.back().energy; }
};

struct IqccOptions {
    MinimizeOptions minimize;
    SelectPolicy policy = SelectPolicy::extend;
    std::size_t term_cap = CompiledAnsatz::default_term_cap;
    /// Invoked after each completed iteration (and once for the start row).
    std::function<void(const IqccRecord&)> on_iteration;
    /// Invoked with each dressed, compressed Hamiltonian.
    std::function<void(std::size_t, const QubitOperator&)> snapshot;
};

/// The full iterative loop: propose + rank generators on the current
/// Hamiltonian, select m, compile at order k, minimize from t = 0, dress the
/// Hamiltonian (and all tracked observables) with the optimized amplitudes,
/// compress, repeat. Stops early on an empty pool ("converged: no
/// gradients") or when the energy improvement drops below energy_tol.
IqccTrace run_iqcc(const QubitOperator& h0, const BasisState& reference,
                   const IqccSchedule& schedule,
                   const std::map<std::string, QubitOperator>& observables = {},
                   const IqccOptions& options = {});

}  // namespace qcc
