#include "qcc/sparse_state.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "qcc/errors.hpp"

namespace qcc {

namespace {

void check_sorted_unique(const std::vector<Limb>& keys, std::size_t stride, std::size_t count) {
    for (std::size_t i = 1; i < count; ++i) {
        const std::span<const Limb> prev{&keys[(i - 1) * stride], stride};
        const std::span<const Limb> cur{&keys[i * stride], stride};
        if (bits::compare(prev, cur) >= 0)
            throw Error("internal: sparse state basis not strictly sorted after merge");
    }
}

}  // namespace

SparseState SparseState::reference(std::uint32_t n_qubits, const BasisState& occupied) {
    if (occupied.n_qubits() != n_qubits)
        throw DimensionError("reference state width does not match qubit count");
    SparseState s;
    s.n_qubits_ = n_qubits;
    s.stride_ = bits::limb_count(n_qubits);
    s.keys_.assign(occupied.limbs().begin(), occupied.limbs().end());
    s.coeffs_.assign(1, 1.0);
    return s;
}

SparseState SparseState::reference(std::uint32_t n_qubits, std::uint64_t occupied) {
    return reference(n_qubits, BasisState(n_qubits, occupied));
}

BasisState SparseState::basis_state(std::size_t i) const {
    const auto k = key(i);
    return BasisState(n_qubits_, std::vector<Limb>(k.begin(), k.end()));
}

double SparseState::norm() const {
    double s = 0.0;
    for (double c : coeffs_)
        s += c * c;
    return std::sqrt(s);
}

std::optional<std::size_t> SparseState::find(std::span<const Limb> key) const {
    std::size_t lo = 0, hi = size();
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        const int c = bits::compare({&keys_[mid * stride_], stride_}, key);
        if (c == 0)
            return mid;
        if (c < 0)
            lo = mid + 1;
        else
            hi = mid;
    }
    return std::nullopt;
}

void SparseState::dump(std::ostream& out) const {
    char buf[64];
    for (std::size_t i = 0; i < size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", coeffs_[i]);
        out << bits::to_binary(key(i), n_qubits_) << ' ' << buf << '\n';
    }
}

SparseState apply_generator_exponential(const SparseState& s, const PauliWord& t_word,
                                        double amplitude, std::size_t cap) {
    if (t_word.n_qubits() != s.n_qubits())
        throw DimensionError("generator width does not match state");
    if (!is_imaginary_generator(t_word))
        throw ContractError("generator must contain an odd number of y factors");

    if (amplitude == 0.0)
        return s;

    const std::size_t stride = s.stride_;
    const std::size_t n = s.size();
    const double c_half = std::cos(amplitude / 2);
    const double s_half = std::sin(amplitude / 2);

    // -i * i^p X Z = i^{p-1} X Z; p odd makes this real.
    const int real_power = (t_word.phase_power() + 3) & 3;
    const double flip_scale = (real_power == 0 ? 1.0 : -1.0) * s_half;
    const auto x_mask = t_word.x_mask();
    const auto z_mask = t_word.z_mask();

    // Flipped branch: keys XOR x_mask with the Z eigenvalue folded in.
    std::vector<Limb> flip_keys(n * stride);
    std::vector<double> flip_coeffs(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::span<const Limb> k{&s.keys_[i * stride], stride};
        std::span<Limb> fk{&flip_keys[i * stride], stride};
        for (std::size_t l = 0; l < stride; ++l)
            fk[l] = k[l] ^ x_mask[l];
        const double sign = bits::parity_and(z_mask, k) ? -1.0 : 1.0;
        flip_coeffs[i] = flip_scale * sign * s.coeffs_[i];
    }

    // Restore sorted order on the flipped branch.
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return bits::compare({&flip_keys[a * stride], stride}, {&flip_keys[b * stride], stride}) <
               0;
    });

    // Single merge pass over the two sorted branches, summing coincident
    // keys and dropping exact cancellations.
    SparseState out;
    out.n_qubits_ = s.n_qubits_;
    out.stride_ = stride;
    out.norm_loss_log_ = s.norm_loss_log_;
    out.keys_.reserve(2 * n * stride);
    out.coeffs_.reserve(2 * n);

    auto emit = [&](std::span<const Limb> key, double coeff) {
        if (coeff == 0.0)
            return;
        out.keys_.insert(out.keys_.end(), key.begin(), key.end());
        out.coeffs_.push_back(coeff);
    };

    std::size_t ia = 0, ib = 0;
    while (ia < n || ib < n) {
        if (ia >= n) {
            const std::uint32_t j = order[ib++];
            emit({&flip_keys[j * stride], stride}, flip_coeffs[j]);
            continue;
        }
        if (ib >= n) {
            emit({&s.keys_[ia * stride], stride}, c_half * s.coeffs_[ia]);
            ++ia;
            continue;
        }
        const std::span<const Limb> ka{&s.keys_[ia * stride], stride};
        const std::uint32_t j = order[ib];
        const std::span<const Limb> kb{&flip_keys[j * stride], stride};
        const int cmp = bits::compare(ka, kb);
        if (cmp < 0) {
            emit(ka, c_half * s.coeffs_[ia]);
            ++ia;
        } else if (cmp > 0) {
            emit(kb, flip_coeffs[j]);
            ++ib;
        } else {
            emit(ka, c_half * s.coeffs_[ia] + flip_coeffs[j]);
            ++ia;
            ++ib;
        }
    }

    check_sorted_unique(out.keys_, stride, out.coeffs_.size());

    if (out.coeffs_.size() > cap)
        return truncate(out, cap);
    return out;
}

SparseState truncate(const SparseState& s, std::size_t cap) {
    if (cap < 1)
        throw ContractError("truncation cap must be at least 1");
    if (s.size() <= cap)
        return s;

    const std::size_t stride = s.stride_;
    std::vector<std::uint32_t> idx(s.size());
    std::iota(idx.begin(), idx.end(), 0);

    // Top-cap by |coefficient|; ties keep the smaller basis value.
    const auto ranks_before = [&](std::uint32_t a, std::uint32_t b) {
        const double ca = std::fabs(s.coeffs_[a]);
        const double cb = std::fabs(s.coeffs_[b]);
        if (ca != cb)
            return ca > cb;
        return bits::compare({&s.keys_[a * stride], stride}, {&s.keys_[b * stride], stride}) < 0;
    };
    std::nth_element(idx.begin(), idx.begin() + cap, idx.end(), ranks_before);
    idx.resize(cap);
    std::sort(idx.begin(), idx.end());  // keys were ascending, so index order is key order

    SparseState out;
    out.n_qubits_ = s.n_qubits_;
    out.stride_ = stride;
    out.keys_.reserve(cap * stride);
    out.coeffs_.reserve(cap);
    double kept_sq = 0.0;
    for (std::uint32_t i : idx) {
        out.keys_.insert(out.keys_.end(), &s.keys_[i * stride], &s.keys_[(i + 1) * stride]);
        out.coeffs_.push_back(s.coeffs_[i]);
        kept_sq += s.coeffs_[i] * s.coeffs_[i];
    }
    const double lambda = std::sqrt(kept_sq);
    for (double& c : out.coeffs_)
        c /= lambda;
    out.norm_loss_log_ = s.norm_loss_log_;
    out.norm_loss_log_.push_back(lambda);
    return out;
}

}  // namespace qcc
