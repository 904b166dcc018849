#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qcc/generators.hpp"

namespace qcc {

/// Number of symmetric-polynomial terms kept at order k with m generators:
/// sum of binomial(m, j) for j = 0..k. Throws CapacityError on overflow.
std::uint64_t count_terms(std::uint32_t m, std::uint32_t k);

/// Content hashes used to key compiled-ansatz cache files.
std::uint64_t content_hash(const QubitOperator& op);
std::uint64_t content_hash(std::span<const PauliWord> words);

/// Hex key "<op hash>-<generator hash>-<order>" naming a cache entry.
std::string ansatz_cache_key(const QubitOperator& h, std::span<const PauliWord> generators,
                             std::uint32_t k);

/// Amplitude-independent intermediates of the order-K energy functional:
/// the symmetric-polynomial term list over generator subsets, each term's
/// +-1 sign on the reference and its slot in the deduplicated flipped-state
/// basis, and the operator matrix over those states.
///
/// evaluate() returns the normalized energy together with the raw quadratic
/// form (`numerator`, which is not variationally bound) and the squared
/// amplitude-vector norm; energy * norm == numerator identically.
class CompiledAnsatz {
  public:
    static constexpr std::size_t default_term_cap = 100'000'000;

    /// Enumerates subsets of sizes 0..k in lexicographic order, folds each
    /// product's phase and reference z-eigenvalue into a +-1 sign, dedupes
    /// flipped states, and builds the operator matrix over them. Throws
    /// ContractError for non-imaginary generators or k > pool size and
    /// CapacityError when the term count would exceed term_cap.
    static CompiledAnsatz compile(const QubitOperator& h, const GeneratorPool& pool,
                                  std::uint32_t k, std::size_t term_cap = default_term_cap);

    std::uint32_t order() const { return order_; }
    std::size_t generator_count() const { return m_; }
    std::size_t term_count() const { return signs_.size(); }
    std::size_t unique_state_count() const { return hessian_dim_; }
    BasisState unique_state(std::size_t slot) const;
    const BasisState& reference() const { return reference_; }
    std::size_t hessian_nonzeros() const { return hess_cols_.size(); }

    struct Value {
        double energy = 0.0;
        double numerator = 0.0;  // quadratic form before normalization
        double norm = 0.0;       // squared amplitude-vector norm
    };

    /// Energy at the given amplitudes. Throws NumericalError when any
    /// |cos(t_j/2)| falls below 1e-12 (reference instability).
    Value evaluate(std::span<const double> t) const;

    /// Energy plus its analytic amplitude gradient, reusing the H*u product
    /// of the energy evaluation.
    Value evaluate(std::span<const double> t, std::span<double> grad) const;

    std::vector<double> gradient(std::span<const double> t) const;

    /// Hex key derived from (operator hash, generator list hash, order) for
    /// naming cache files.
    const std::string& cache_key() const { return cache_key_; }

    void save(std::ostream& out) const;
    static CompiledAnsatz load(std::istream& in);

  private:
    CompiledAnsatz() = default;

    struct TrigTables;
    void build_amplitudes(const TrigTables& trig, std::vector<double>& kappa,
                          std::vector<double>& u) const;
    void apply_hessian(std::span<const double> u, std::span<double> hu) const;

    std::uint32_t order_ = 0;
    std::uint32_t m_ = 0;
    std::uint32_t n_qubits_ = 0;
    BasisState reference_{1};

    // Term q arises from term parent_[q] by appending generator last_[q];
    // term 0 is the empty subset.
    std::vector<std::uint32_t> parent_;
    std::vector<std::uint16_t> last_;
    std::vector<std::int8_t> signs_;
    std::vector<std::uint32_t> slots_;

    // Deduplicated flipped reference states, ascending, flat limbs.
    std::size_t state_stride_ = 0;
    std::vector<Limb> states_;

    // Operator matrix over the unique states, full symmetric CSR.
    std::size_t hessian_dim_ = 0;
    std::vector<std::size_t> hess_rows_;
    std::vector<std::uint32_t> hess_cols_;
    std::vector<double> hess_vals_;

    std::string cache_key_;
};

}  // namespace qcc
