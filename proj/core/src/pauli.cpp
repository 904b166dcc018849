#include "qcc/pauli.hpp"

#include <cctype>
#include <charconv>

#include "qcc/errors.hpp"

namespace qcc {

namespace {

std::complex<double> quarter_phase(int power) {
    switch (power & 3) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

void require_same_width(const PauliWord& a, const PauliWord& b) {
    if (a.n_qubits() != b.n_qubits())
        throw DimensionError("pauli words act on different qubit counts: " +
                             std::to_string(a.n_qubits()) + " vs " + std::to_string(b.n_qubits()));
}

}  // namespace

PauliWord::PauliWord(std::uint32_t n_qubits)
    : n_qubits_(n_qubits),
      x_mask_(bits::limb_count(n_qubits), 0),
      z_mask_(bits::limb_count(n_qubits), 0) {
    if (n_qubits == 0)
        throw ContractError("pauli word needs at least one qubit");
}

PauliWord::PauliWord(std::uint32_t n_qubits, std::vector<Limb> x_mask, std::vector<Limb> z_mask,
                     int phase_power)
    : n_qubits_(n_qubits),
      x_mask_(std::move(x_mask)),
      z_mask_(std::move(z_mask)),
      phase_power_(phase_power & 3) {
    if (n_qubits == 0)
        throw ContractError("pauli word needs at least one qubit");
    if (x_mask_.size() != bits::limb_count(n_qubits) || z_mask_.size() != x_mask_.size())
        throw ContractError("mask limb count does not match qubit count");
}

PauliWord PauliWord::identity(std::uint32_t n_qubits) {
    return PauliWord(n_qubits);
}

PauliWord PauliWord::single(char axis, std::uint32_t qubit, std::uint32_t n_qubits) {
    if (qubit >= n_qubits)
        throw ContractError("qubit index out of range");
    PauliWord w(n_qubits);
    switch (axis) {
        case 'X': case 'x':
            bits::set(w.x_mask_, qubit, true);
            break;
        case 'Z': case 'z':
            bits::set(w.z_mask_, qubit, true);
            break;
        case 'Y': case 'y':
            bits::set(w.x_mask_, qubit, true);
            bits::set(w.z_mask_, qubit, true);
            w.phase_power_ = 1;  // y = i x z
            break;
        default:
            throw ContractError(std::string("unknown pauli axis '") + axis + "'");
    }
    return w;
}

PauliWord PauliWord::parse(std::string_view text, std::uint32_t n_qubits) {
    struct Factor {
        char axis;
        std::uint32_t qubit;
    };
    std::vector<Factor> factors;
    std::uint32_t max_index = 0;

    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
            ++i;
        if (i >= text.size())
            break;
        const char axis = text[i];
        if (axis == 'I' || axis == 'i') {
            ++i;
            continue;  // explicit identity token
        }
        if (axis != 'X' && axis != 'Y' && axis != 'Z' && axis != 'x' && axis != 'y' && axis != 'z')
            throw ParseError(std::string("unknown pauli factor '") + axis + "'");
        ++i;
        std::uint32_t qubit = 0;
        const auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + text.size(), qubit);
        if (ec != std::errc() || ptr == text.data() + i)
            throw ParseError("pauli factor '" + std::string(1, axis) + "' lacks a qubit index");
        i = static_cast<std::size_t>(ptr - text.data());
        factors.push_back({axis, qubit});
        max_index = std::max(max_index, qubit);
    }

    if (n_qubits == 0)
        n_qubits = factors.empty() ? 1 : max_index + 1;
    PauliWord w(n_qubits);
    for (const auto& f : factors) {
        if (f.qubit >= n_qubits)
            throw ParseError("qubit index " + std::to_string(f.qubit) + " out of range for " +
                             std::to_string(n_qubits) + " qubits");
        if (bits::get(w.x_mask_, f.qubit) || bits::get(w.z_mask_, f.qubit))
            throw ParseError("duplicate factor on qubit " + std::to_string(f.qubit));
        w = multiply(w, single(f.axis, f.qubit, n_qubits));
    }
    return w;
}

std::complex<double> PauliWord::phase() const {
    return quarter_phase(phase_power_);
}

bool PauliWord::is_identity() const {
    return bits::is_zero(x_mask_) && bits::is_zero(z_mask_) && phase_power_ == 0;
}

bool PauliWord::is_hermitian() const {
    // W^dag = i^{-p} (-1)^{y_count} X Z, so W is Hermitian iff p and y_count
    // have equal parity.
    return ((static_cast<std::uint32_t>(phase_power_) ^ y_count()) & 1) == 0;
}

std::string PauliWord::to_string() const {
    std::string out;
    for (std::uint32_t q = 0; q < n_qubits_; ++q) {
        const bool x = bits::get(x_mask_, q);
        const bool z = bits::get(z_mask_, q);
        if (!x && !z)
            continue;
        if (!out.empty())
            out += ' ';
        out += x ? (z ? 'Y' : 'X') : 'Z';
        out += std::to_string(q);
    }
    return out.empty() ? "I" : out;
}

PauliWord multiply(const PauliWord& a, const PauliWord& b) {
    require_same_width(a, b);
    // Commute Z(a) past X(b): each overlapping bit contributes a -1.
    const int swap_sign = bits::parity_and(a.z_mask(), b.x_mask()) ? 2 : 0;
    std::vector<Limb> x = bits::xor_copy(a.x_mask(), b.x_mask());
    std::vector<Limb> z = bits::xor_copy(a.z_mask(), b.z_mask());
    return PauliWord(a.n_qubits(), std::move(x), std::move(z),
                     a.phase_power() + b.phase_power() + swap_sign);
}

bool commutes(const PauliWord& a, const PauliWord& b) {
    require_same_width(a, b);
    return bits::parity_and(a.x_mask(), b.z_mask()) == bits::parity_and(a.z_mask(), b.x_mask());
}

bool is_imaginary_generator(const PauliWord& t) {
    return t.y_count() & 1;
}

std::complex<double> XZFactorization::phase() const {
    return quarter_phase(phase_power);
}

XZFactorization xz_factorize(const PauliWord& t) {
    const std::uint32_t n = t.n_qubits();
    XZFactorization f{
        t.phase_power(),
        PauliWord(n, {t.x_mask().begin(), t.x_mask().end()},
                  std::vector<Limb>(bits::limb_count(n), 0), 0),
        PauliWord(n, std::vector<Limb>(bits::limb_count(n), 0),
                  {t.z_mask().begin(), t.z_mask().end()}, 0),
    };
    return f;
}

}  // namespace qcc
