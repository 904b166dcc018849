#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <vector>

#include "qcc/qubit_operator.hpp"

namespace qcc {

inline constexpr std::size_t unlimited_cap = std::numeric_limits<std::size_t>::max();

/// A real vector in the 2^n qubit Hilbert space, stored as a strictly
/// ascending array of basis keys with aligned coefficients. States are
/// immutable snapshots; every operation returns a new state.
class SparseState {
  public:
    /// Unit coefficient on a single basis state.
    static SparseState reference(std::uint32_t n_qubits, const BasisState& occupied);
    static SparseState reference(std::uint32_t n_qubits, std::uint64_t occupied = 0);

    std::uint32_t n_qubits() const { return n_qubits_; }
    std::size_t stride() const { return stride_; }
    std::size_t size() const { return coeffs_.size(); }

    std::span<const Limb> key(std::size_t i) const { return {&keys_[i * stride_], stride_}; }
    std::span<const Limb> keys() const { return keys_; }
    BasisState basis_state(std::size_t i) const;
    double coeff(std::size_t i) const { return coeffs_[i]; }
    std::span<const double> coeffs() const { return coeffs_; }

    /// One renormalization factor per truncation event, in order.
    const std::vector<double>& norm_loss_log() const { return norm_loss_log_; }

    double norm() const;
    std::optional<std::size_t> find(std::span<const Limb> key) const;

    /// Text dump: "<bitstring> <coefficient>" lines, sorted.
    void dump(std::ostream& out) const;

  private:
    SparseState() = default;

    std::uint32_t n_qubits_ = 0;
    std::size_t stride_ = 0;
    std::vector<Limb> keys_;
    std::vector<double> coeffs_;
    std::vector<double> norm_loss_log_;

    friend SparseState apply_generator_exponential(const SparseState&, const PauliWord&, double,
                                                   std::size_t);
    friend SparseState truncate(const SparseState&, std::size_t);
};

/// Applies one ansatz factor exp(-i*amplitude*T/2) by a single sorted merge:
/// cos(a/2) on existing keys plus sin(a/2) times the real action of -iT on
/// bit-flipped keys. T must be an imaginary generator. If the merged length
/// exceeds cap the state is truncated as by truncate().
SparseState apply_generator_exponential(const SparseState& s, const PauliWord& t_word,
                                        double amplitude, std::size_t cap = unlimited_cap);

/// Keeps the cap largest-|coefficient| entries (ties keep the smaller basis
/// value), renormalizes by the norm of the kept block, and logs that norm.
/// A state already within cap is returned unchanged with nothing logged.
SparseState truncate(const SparseState& s, std::size_t cap);

}  // namespace qcc
