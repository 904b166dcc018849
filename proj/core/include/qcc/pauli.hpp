#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qcc/bits.hpp"

namespace qcc {

using bits::Limb;

/// An n-qubit Pauli word in canonical form: the operator
///
///     i^phase_power * X(x_mask) * Z(z_mask)
///
/// where X(m)/Z(m) are products of single-qubit x/z over the set bits of m
/// and y = i*x*z. Phases are quarter powers of i, kept as exact integers
/// mod 4. A word with phase_power == y_count() mod 4 is the plain Hermitian
/// tensor product of x/y/z factors.
class PauliWord {
  public:
    /// Identity word on n qubits.
    explicit PauliWord(std::uint32_t n_qubits);

    /// Word with the given masks and quarter phase.
    PauliWord(std::uint32_t n_qubits, std::vector<Limb> x_mask, std::vector<Limb> z_mask,
              int phase_power);

    static PauliWord identity(std::uint32_t n_qubits);

    /// Single-qubit factor; axis is one of 'X', 'Y', 'Z'.
    static PauliWord single(char axis, std::uint32_t qubit, std::uint32_t n_qubits);

    /// Parses whitespace-separated factors "X<q>", "Y<q>", "Z<q>"; an empty
    /// list or the token "I" is the identity. With n_qubits == 0 the width
    /// is inferred as 1 + the highest qubit index (minimum 1).
    static PauliWord parse(std::string_view text, std::uint32_t n_qubits = 0);

    std::uint32_t n_qubits() const { return n_qubits_; }
    std::span<const Limb> x_mask() const { return x_mask_; }
    std::span<const Limb> z_mask() const { return z_mask_; }
    int phase_power() const { return phase_power_; }
    std::complex<double> phase() const;

    bool is_identity() const;
    std::uint32_t y_count() const { return bits::popcount_and(x_mask_, z_mask_); }
    bool is_hermitian() const;

    /// Factor text without any phase prefix, e.g. "X0 Y3 Z7" or "I".
    std::string to_string() const;

    friend bool operator==(const PauliWord& a, const PauliWord& b) = default;

  private:
    std::uint32_t n_qubits_ = 0;
    std::vector<Limb> x_mask_;
    std::vector<Limb> z_mask_;
    int phase_power_ = 0;  // 0..3
};

/// Canonical-form product a*b with the accumulated quarter phase.
/// Throws DimensionError on mismatched qubit counts.
PauliWord multiply(const PauliWord& a, const PauliWord& b);

/// True iff a*b == b*a. Throws DimensionError on mismatched qubit counts.
bool commutes(const PauliWord& a, const PauliWord& b);

/// True iff the word has an odd number of y factors, i.e. -i*t has purely
/// real matrix elements in the computational basis.
bool is_imaginary_generator(const PauliWord& t);

/// Unique splitting of a word into phase * x_word * z_word.
struct XZFactorization {
    int phase_power = 0;       // phase is i^phase_power, one of {+1, -1, +i, -i}
    PauliWord x_word;          // empty z_mask
    PauliWord z_word;          // empty x_mask

    std::complex<double> phase() const;
};

XZFactorization xz_factorize(const PauliWord& t);

}  // namespace qcc
