#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qcc/pauli.hpp"

namespace qcc {

class SparseState;

/// A single computational-basis state of n qubits. Bit q is the occupation
/// of qubit q; textual form is most-significant bit first.
class BasisState {
  public:
    explicit BasisState(std::uint32_t n_qubits);
    BasisState(std::uint32_t n_qubits, std::uint64_t value);
    BasisState(std::uint32_t n_qubits, std::vector<Limb> limbs);

    /// Parses an msb-first bitstring such as "0011" (qubits 0 and 1 set).
    static BasisState parse(std::string_view bitstring);

    std::uint32_t n_qubits() const { return n_qubits_; }
    std::span<const Limb> limbs() const { return limbs_; }
    bool bit(std::uint32_t q) const { return bits::get(limbs_, q); }
    void set_bit(std::uint32_t q, bool v) { bits::set(limbs_, q, v); }

    /// This state with the given x-mask applied (bit flips).
    BasisState flipped(std::span<const Limb> x_mask) const;

    std::string to_string() const { return bits::to_binary(limbs_, n_qubits_); }

    friend bool operator==(const BasisState& a, const BasisState& b) = default;

  private:
    std::uint32_t n_qubits_ = 0;
    std::vector<Limb> limbs_;
};

/// A sparse real-coefficient sum of Hermitian Pauli words. Terms are stored
/// canonically sorted by (x_mask, z_mask); runs of terms sharing an x_mask
/// form contiguous groups, which is what makes matrix elements cheap.
/// Immutable after construction.
class QubitOperator {
  public:
    /// The zero operator.
    explicit QubitOperator(std::uint32_t n_qubits);

    /// Canonicalizes flat (x, z, coefficient) rows: sorts, merges duplicates,
    /// drops exact zeros. Masks are concatenated limb rows of width stride().
    QubitOperator(std::uint32_t n_qubits, std::vector<Limb> xs, std::vector<Limb> zs,
                  std::vector<double> coeffs);

    /// Builds from Hermitian words; a -1 canonical phase folds into the
    /// coefficient. Duplicate words are summed. Throws ContractError on a
    /// non-Hermitian word.
    static QubitOperator from_terms(std::uint32_t n_qubits,
                                    const std::vector<std::pair<PauliWord, double>>& terms);

    std::uint32_t n_qubits() const { return n_qubits_; }
    std::size_t stride() const { return stride_; }
    std::size_t size() const { return coeffs_.size(); }
    bool empty() const { return coeffs_.empty(); }

    std::span<const Limb> term_x(std::size_t i) const { return {&xs_[i * stride_], stride_}; }
    std::span<const Limb> term_z(std::size_t i) const { return {&zs_[i * stride_], stride_}; }
    double coefficient(std::size_t i) const { return coeffs_[i]; }
    /// +1 or -1 for even-y terms (the real value of the canonical phase),
    /// 0 for odd-y terms, whose real matrix elements vanish.
    int zsign(std::size_t i) const { return zsigns_[i]; }

    /// Canonical Hermitian word of term i.
    PauliWord word(std::size_t i) const;

    /// Coefficient of the given word, with its phase folded in; 0 if absent.
    double coefficient(const PauliWord& w) const;

    /// Sum of coefficients of the identity term (0 if absent).
    double identity_coefficient() const;

    // Contiguous runs of terms sharing an x_mask, sorted by x_mask.
    std::size_t group_count() const { return group_offsets_.size() - 1; }
    std::span<const Limb> group_x(std::size_t g) const { return term_x(group_offsets_[g]); }
    std::size_t group_begin(std::size_t g) const { return group_offsets_[g]; }
    std::size_t group_end(std::size_t g) const { return group_offsets_[g + 1]; }
    std::optional<std::size_t> find_group(std::span<const Limb> x) const;

    /// Largest |coefficient|.
    double max_abs_coefficient() const;

    friend bool operator==(const QubitOperator& a, const QubitOperator& b) = default;

  private:
    std::uint32_t n_qubits_ = 0;
    std::size_t stride_ = 0;
    std::vector<Limb> xs_;
    std::vector<Limb> zs_;
    std::vector<double> coeffs_;
    std::vector<std::int8_t> zsigns_;
    std::vector<std::size_t> group_offsets_;
};

/// Reads the text format: optional "qubits: <n>" line, '#' comments, one
/// "<coefficient> <pauli word>" term per line. Without a qubits line the
/// width is inferred as 1 + the highest qubit index. Duplicate terms are
/// summed (with a warning on the stream `warnings` when given).
QubitOperator load_operator(std::istream& in, const std::string& name = "<stream>",
                            std::ostream* warnings = nullptr);
QubitOperator load_operator(const std::string& path, std::ostream* warnings = nullptr);

/// Full-precision canonical text output; load(save(op)) == op exactly.
void save_operator(const QubitOperator& op, std::ostream& out);
void save_operator(const QubitOperator& op, const std::string& path);

/// Real part of <bra|op|ket>. Only terms whose x_mask equals bra XOR ket
/// contribute; each adds coefficient * canonical-phase real part * z sign
/// on the ket.
double matrix_element(const QubitOperator& op, const BasisState& bra, const BasisState& ket);

/// <state|op|state> for a real sparse state, streamed one row at a time
/// (the operator matrix is never materialized). Warns to stderr when the
/// state norm deviates from 1 by more than 1e-8.
double expectation(const QubitOperator& op, const SparseState& state);

/// y[r] = sum_c Re<w_r|op|w_c> v[c] over a sorted strided key set. Rows are
/// processed in parallel chunks; the result is deterministic.
void apply_to_basis(const QubitOperator& op, std::span<const Limb> keys, std::size_t stride,
                    std::span<const double> v, std::span<double> y);

/// Similarity-transforms h by one ansatz factor built on t_word (which must
/// be an imaginary generator): terms commuting with t_word pass through,
/// anticommuting terms rotate into cos(amplitude)*P - i*sin(amplitude)*P*T.
/// The result is Hermitian with real coefficients by construction.
QubitOperator dress(const QubitOperator& h, const PauliWord& t_word, double amplitude);

/// Sequential multi-generator dressing in ansatz order: the k=1 factor is
/// applied first, so the reference expectation of the result equals the
/// ansatz energy at the given amplitudes.
QubitOperator dress(const QubitOperator& h, std::span<const PauliWord> t_words,
                    std::span<const double> amplitudes);

struct CompressResult {
    QubitOperator op;
    double removed_weight = 0.0;  // sum of squared dropped coefficients
    double removed_l1 = 0.0;      // sum of |dropped coefficients|, bounds any
                                  // matrix-element shift
};

/// Drops terms with |coefficient| < threshold.
CompressResult compress(const QubitOperator& op, double threshold);

}  // namespace qcc
