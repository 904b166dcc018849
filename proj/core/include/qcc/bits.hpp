#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace qcc::bits {

// Fixed-width bit strings stored as little-endian arrays of 64-bit limbs:
// bit q lives in limb q/64 at position q%64. Qubit 0 is the least
// significant bit.

using Limb = std::uint64_t;

inline std::size_t limb_count(std::uint32_t n_bits) {
    return (static_cast<std::size_t>(n_bits) + 63) / 64;
}

inline bool get(std::span<const Limb> v, std::uint32_t bit) {
    return (v[bit / 64] >> (bit % 64)) & 1u;
}

inline void set(std::span<Limb> v, std::uint32_t bit, bool value) {
    const Limb mask = Limb{1} << (bit % 64);
    if (value)
        v[bit / 64] |= mask;
    else
        v[bit / 64] &= ~mask;
}

inline std::uint32_t popcount(std::span<const Limb> v) {
    std::uint32_t n = 0;
    for (Limb w : v)
        n += static_cast<std::uint32_t>(std::popcount(w));
    return n;
}

inline std::uint32_t popcount_and(std::span<const Limb> a, std::span<const Limb> b) {
    std::uint32_t n = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        n += static_cast<std::uint32_t>(std::popcount(a[i] & b[i]));
    return n;
}

/// Parity of popcount(a AND b); the workhorse of every sign rule.
inline bool parity_and(std::span<const Limb> a, std::span<const Limb> b) {
    Limb acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        acc ^= a[i] & b[i];
    return std::popcount(acc) & 1;
}

inline bool is_zero(std::span<const Limb> v) {
    for (Limb w : v)
        if (w != 0)
            return false;
    return true;
}

inline bool equal(std::span<const Limb> a, std::span<const Limb> b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i])
            return false;
    return true;
}

/// Natural binary order: compares as unsigned integers.
inline int compare(std::span<const Limb> a, std::span<const Limb> b) {
    for (std::size_t i = a.size(); i-- > 0;) {
        if (a[i] != b[i])
            return a[i] < b[i] ? -1 : 1;
    }
    return 0;
}

inline void xor_inplace(std::span<Limb> a, std::span<const Limb> b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        a[i] ^= b[i];
}

inline std::vector<Limb> xor_copy(std::span<const Limb> a, std::span<const Limb> b) {
    std::vector<Limb> out(a.begin(), a.end());
    xor_inplace(out, b);
    return out;
}

inline std::uint32_t lowest_set_bit(std::span<const Limb> v) {
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] != 0)
            return static_cast<std::uint32_t>(i * 64 + std::countr_zero(v[i]));
    return ~std::uint32_t{0};
}

/// Most-significant bit first, n_bits characters.
inline std::string to_binary(std::span<const Limb> v, std::uint32_t n_bits) {
    std::string out(n_bits, '0');
    for (std::uint32_t q = 0; q < n_bits; ++q)
        if (get(v, q))
            out[n_bits - 1 - q] = '1';
    return out;
}

}  // namespace qcc::bits
