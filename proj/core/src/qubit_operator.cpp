#include "qcc/qubit_operator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include "qcc/errors.hpp"
#include "qcc/parallel.hpp"
#include "qcc/sparse_state.hpp"

namespace qcc {

namespace {

// Real value of i^p for even p; odd-y words have no real matrix elements.
std::int8_t canonical_zsign(std::uint32_t y_count) {
    switch (y_count & 3) {
        case 0: return 1;
        case 2: return -1;
        default: return 0;
    }
}

constexpr std::size_t kDressGrain = 2048;
constexpr std::size_t kRowGrain = 256;

}  // namespace

BasisState::BasisState(std::uint32_t n_qubits)
    : n_qubits_(n_qubits), limbs_(bits::limb_count(n_qubits), 0) {
    if (n_qubits == 0)
        throw ContractError("basis state needs at least one qubit");
}

BasisState::BasisState(std::uint32_t n_qubits, std::uint64_t value) : BasisState(n_qubits) {
    limbs_[0] = value;
    if (n_qubits < 64 && (value >> n_qubits) != 0)
        throw ContractError("basis state value exceeds qubit count");
}

BasisState::BasisState(std::uint32_t n_qubits, std::vector<Limb> limbs)
    : n_qubits_(n_qubits), limbs_(std::move(limbs)) {
    if (limbs_.size() != bits::limb_count(n_qubits))
        throw ContractError("basis state limb count does not match qubit count");
}

BasisState BasisState::parse(std::string_view bitstring) {
    if (bitstring.empty())
        throw ParseError("empty bitstring");
    BasisState s(static_cast<std::uint32_t>(bitstring.size()));
    for (std::size_t i = 0; i < bitstring.size(); ++i) {
        const char c = bitstring[bitstring.size() - 1 - i];
        if (c == '1')
            s.set_bit(static_cast<std::uint32_t>(i), true);
        else if (c != '0')
            throw ParseError("bitstring may contain only '0' and '1'");
    }
    return s;
}

BasisState BasisState::flipped(std::span<const Limb> x_mask) const {
    BasisState out = *this;
    bits::xor_inplace(out.limbs_, x_mask);
    return out;
}

QubitOperator::QubitOperator(std::uint32_t n_qubits)
    : n_qubits_(n_qubits), stride_(bits::limb_count(n_qubits)), group_offsets_{0} {
    if (n_qubits == 0)
        throw ContractError("operator needs at least one qubit");
}

QubitOperator::QubitOperator(std::uint32_t n_qubits, std::vector<Limb> xs, std::vector<Limb> zs,
                             std::vector<double> coeffs)
    : QubitOperator(n_qubits) {
    const std::size_t n = coeffs.size();
    if (xs.size() != n * stride_ || zs.size() != n * stride_)
        throw ContractError("term row size does not match coefficient count");

    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        const int cx = bits::compare({&xs[a * stride_], stride_}, {&xs[b * stride_], stride_});
        if (cx != 0)
            return cx < 0;
        const int cz = bits::compare({&zs[a * stride_], stride_}, {&zs[b * stride_], stride_});
        if (cz != 0)
            return cz < 0;
        return a < b;  // fixes the summation order of duplicates
    });

    xs_.reserve(n * stride_);
    zs_.reserve(n * stride_);
    coeffs_.reserve(n);
    std::size_t i = 0;
    while (i < n) {
        const std::uint32_t first = order[i];
        const std::span<const Limb> x{&xs[first * stride_], stride_};
        const std::span<const Limb> z{&zs[first * stride_], stride_};
        double c = coeffs[first];
        ++i;
        while (i < n && bits::equal({&xs[order[i] * stride_], stride_}, x) &&
               bits::equal({&zs[order[i] * stride_], stride_}, z)) {
            c += coeffs[order[i]];
            ++i;
        }
        if (c == 0.0)
            continue;
        xs_.insert(xs_.end(), x.begin(), x.end());
        zs_.insert(zs_.end(), z.begin(), z.end());
        coeffs_.push_back(c);
        zsigns_.push_back(canonical_zsign(bits::popcount_and(x, z)));
    }

    group_offsets_.clear();
    for (std::size_t t = 0; t < coeffs_.size(); ++t) {
        if (t == 0 || !bits::equal(term_x(t - 1), term_x(t)))
            group_offsets_.push_back(t);
    }
    group_offsets_.push_back(coeffs_.size());
}

QubitOperator QubitOperator::from_terms(
    std::uint32_t n_qubits, const std::vector<std::pair<PauliWord, double>>& terms) {
    const std::size_t stride = bits::limb_count(n_qubits);
    std::vector<Limb> xs, zs;
    std::vector<double> coeffs;
    xs.reserve(terms.size() * stride);
    zs.reserve(terms.size() * stride);
    coeffs.reserve(terms.size());
    for (const auto& [word, coeff] : terms) {
        if (word.n_qubits() != n_qubits)
            throw DimensionError("term width does not match operator");
        if (!word.is_hermitian())
            throw ContractError("operator terms must be Hermitian words: " + word.to_string());
        // i^p X Z = i^{p - y_count} * canonical word; the leftover power is
        // 0 or 2 for a Hermitian word.
        const int leftover = (word.phase_power() - static_cast<int>(word.y_count() & 3)) & 3;
        const double sign = leftover == 0 ? 1.0 : -1.0;
        xs.insert(xs.end(), word.x_mask().begin(), word.x_mask().end());
        zs.insert(zs.end(), word.z_mask().begin(), word.z_mask().end());
        coeffs.push_back(sign * coeff);
    }
    return QubitOperator(n_qubits, std::move(xs), std::move(zs), std::move(coeffs));
}

PauliWord QubitOperator::word(std::size_t i) const {
    const auto x = term_x(i);
    const auto z = term_z(i);
    return PauliWord(n_qubits_, {x.begin(), x.end()}, {z.begin(), z.end()},
                     static_cast<int>(bits::popcount_and(x, z) & 3));
}

double QubitOperator::coefficient(const PauliWord& w) const {
    if (w.n_qubits() != n_qubits_)
        throw DimensionError("word width does not match operator");
    const auto g = find_group(w.x_mask());
    if (!g)
        return 0.0;
    for (std::size_t t = group_begin(*g); t < group_end(*g); ++t) {
        if (bits::equal(term_z(t), w.z_mask())) {
            const int leftover = (w.phase_power() - static_cast<int>(w.y_count() & 3)) & 3;
            return (leftover == 0 ? 1.0 : -1.0) * coeffs_[t];
        }
    }
    return 0.0;
}

double QubitOperator::identity_coefficient() const {
    if (empty())
        return 0.0;
    const std::size_t t = 0;  // canonical order puts x=0,z=0 first if present
    return bits::is_zero(term_x(t)) && bits::is_zero(term_z(t)) ? coeffs_[t] : 0.0;
}

std::optional<std::size_t> QubitOperator::find_group(std::span<const Limb> x) const {
    std::size_t lo = 0, hi = group_count();
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        const int c = bits::compare(group_x(mid), x);
        if (c == 0)
            return mid;
        if (c < 0)
            lo = mid + 1;
        else
            hi = mid;
    }
    return std::nullopt;
}

double QubitOperator::max_abs_coefficient() const {
    double m = 0.0;
    for (double c : coeffs_)
        m = std::max(m, std::fabs(c));
    return m;
}

QubitOperator load_operator(std::istream& in, const std::string& name, std::ostream* warnings) {
    struct Line {
        double coeff;
        std::string word;
        std::size_t number;
    };
    std::vector<Line> lines;
    std::uint32_t n_qubits = 0;
    bool n_fixed = false;
    bool saw_content = false;

    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string text = raw.substr(0, raw.find('#'));
        const auto begin = text.find_first_not_of(" \t\r");
        if (begin == std::string::npos)
            continue;
        const auto end = text.find_last_not_of(" \t\r");
        text = text.substr(begin, end - begin + 1);

        if (!saw_content && text.rfind("qubits:", 0) == 0) {
            saw_content = true;
            try {
                const long v = std::stol(text.substr(7));
                if (v < 1)
                    throw std::out_of_range("");
                n_qubits = static_cast<std::uint32_t>(v);
                n_fixed = true;
            } catch (const std::exception&) {
                throw ParseError(name + ":" + std::to_string(lineno) + ": bad qubit count");
            }
            continue;
        }
        saw_content = true;

        std::istringstream ls(text);
        double coeff = 0.0;
        if (!(ls >> coeff))
            throw ParseError(name + ":" + std::to_string(lineno) +
                             ": expected a decimal coefficient");
        std::string rest;
        std::getline(ls, rest);
        lines.push_back({coeff, rest, lineno});
    }

    if (!n_fixed) {
        for (const auto& line : lines) {
            try {
                n_qubits = std::max(n_qubits, PauliWord::parse(line.word).n_qubits());
            } catch (const ParseError& e) {
                throw ParseError(name + ":" + std::to_string(line.number) + ": " + e.what());
            }
        }
        if (n_qubits == 0)
            n_qubits = 1;
    }

    std::vector<std::pair<PauliWord, double>> terms;
    terms.reserve(lines.size());
    for (const auto& line : lines) {
        try {
            terms.emplace_back(PauliWord::parse(line.word, n_qubits), line.coeff);
        } catch (const ParseError& e) {
            throw ParseError(name + ":" + std::to_string(line.number) + ": " + e.what());
        }
    }

    if (warnings) {
        std::vector<std::pair<PauliWord, double>> sorted = terms;
        std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
            const int cx = bits::compare(a.first.x_mask(), b.first.x_mask());
            if (cx != 0)
                return cx < 0;
            return bits::compare(a.first.z_mask(), b.first.z_mask()) < 0;
        });
        for (std::size_t i = 1; i < sorted.size(); ++i) {
            if (bits::equal(sorted[i - 1].first.x_mask(), sorted[i].first.x_mask()) &&
                bits::equal(sorted[i - 1].first.z_mask(), sorted[i].first.z_mask()))
                *warnings << name << ": duplicate term '" << sorted[i].first.to_string()
                          << "', coefficients summed\n";
        }
    }

    return QubitOperator::from_terms(n_qubits, terms);
}

QubitOperator load_operator(const std::string& path, std::ostream* warnings) {
    std::ifstream in(path);
    if (!in)
        throw ParseError(path + ": cannot open file");
    return load_operator(in, path, warnings);
}

void save_operator(const QubitOperator& op, std::ostream& out) {
    out << "qubits: " << op.n_qubits() << '\n';
    char buf[64];
    for (std::size_t i = 0; i < op.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", op.coefficient(i));
        out << buf << ' ' << op.word(i).to_string() << '\n';
    }
}

void save_operator(const QubitOperator& op, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw Error(path + ": cannot open file for writing");
    save_operator(op, out);
}

double matrix_element(const QubitOperator& op, const BasisState& bra, const BasisState& ket) {
    if (bra.n_qubits() != op.n_qubits() || ket.n_qubits() != op.n_qubits())
        throw DimensionError("basis state width does not match operator");
    const std::vector<Limb> x = bits::xor_copy(bra.limbs(), ket.limbs());
    const auto g = op.find_group(x);
    if (!g)
        return 0.0;
    double acc = 0.0;
    for (std::size_t t = op.group_begin(*g); t < op.group_end(*g); ++t) {
        const int zs = op.zsign(t);
        if (zs == 0)
            continue;
        const double sign = bits::parity_and(op.term_z(t), ket.limbs()) ? -1.0 : 1.0;
        acc += static_cast<double>(zs) * sign * op.coefficient(t);
    }
    return acc;
}

void apply_to_basis(const QubitOperator& op, std::span<const Limb> keys, std::size_t stride,
                    std::span<const double> v, std::span<double> y) {
    const std::size_t rows = v.size();
    const std::size_t groups = op.group_count();

    auto find_key = [&](std::span<const Limb> key) -> std::size_t {
        std::size_t lo = 0, hi = rows;
        while (lo < hi) {
            const std::size_t mid = lo + (hi - lo) / 2;
            const int c = bits::compare({&keys[mid * stride], stride}, key);
            if (c == 0)
                return mid;
            if (c < 0)
                lo = mid + 1;
            else
                hi = mid;
        }
        return rows;
    };

    const std::size_t chunks = (rows + kRowGrain - 1) / kRowGrain;
    parallel_for(chunks, [&](std::size_t chunk) {
        const std::size_t row_begin = chunk * kRowGrain;
        const std::size_t row_end = std::min(rows, row_begin + kRowGrain);
        std::vector<Limb> target(stride);
        for (std::size_t r = row_begin; r < row_end; ++r) {
            const std::span<const Limb> wr{&keys[r * stride], stride};
            double acc = 0.0;
            for (std::size_t g = 0; g < groups; ++g) {
                const auto gx = op.group_x(g);
                for (std::size_t l = 0; l < stride; ++l)
                    target[l] = wr[l] ^ gx[l];
                const std::size_t c = find_key(target);
                if (c == rows)
                    continue;
                // Z eigenvalues act on the column key.
                double val = 0.0;
                const std::span<const Limb> wc{&keys[c * stride], stride};
                for (std::size_t t = op.group_begin(g); t < op.group_end(g); ++t) {
                    const int zs = op.zsign(t);
                    if (zs == 0)
                        continue;
                    const double sign = bits::parity_and(op.term_z(t), wc) ? -1.0 : 1.0;
                    val += static_cast<double>(zs) * sign * op.coefficient(t);
                }
                acc += val * v[c];
            }
            y[r] = acc;
        }
    });
}

double expectation(const QubitOperator& op, const SparseState& state) {
    if (op.n_qubits() != state.n_qubits())
        throw DimensionError("operator width does not match state");
    const double nrm = state.norm();
    if (std::fabs(nrm - 1.0) > 1e-8)
        std::cerr << "qcc: warning: expectation over a state with norm " << nrm << "\n";
    std::vector<double> y(state.size());
    apply_to_basis(op, state.keys(), state.stride(), state.coeffs(), y);
    double acc = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i)
        acc += state.coeff(i) * y[i];
    return acc;
}

QubitOperator dress(const QubitOperator& h, const PauliWord& t_word, double amplitude) {
    if (t_word.n_qubits() != h.n_qubits())
        throw DimensionError("generator width does not match operator");
    if (!is_imaginary_generator(t_word))
        throw ContractError("dressing generator must contain an odd number of y factors");

    const std::size_t stride = h.stride();
    const std::size_t n = h.size();
    const double cos_a = std::cos(amplitude);
    const double sin_a = std::sin(amplitude);
    const auto xt = t_word.x_mask();
    const auto zt = t_word.z_mask();
    const int pt = t_word.phase_power();

    struct Rows {
        std::vector<Limb> xs, zs;
        std::vector<double> coeffs;
    };
    const std::size_t chunks = (n + kDressGrain - 1) / kDressGrain;
    std::vector<Rows> partial(chunks);

    parallel_for(chunks, [&](std::size_t chunk) {
        Rows& out = partial[chunk];
        const std::size_t begin = chunk * kDressGrain;
        const std::size_t end = std::min(n, begin + kDressGrain);
        out.xs.reserve(2 * (end - begin) * stride);
        out.zs.reserve(2 * (end - begin) * stride);
        out.coeffs.reserve(2 * (end - begin));
        std::vector<Limb> xp(stride), zp(stride);
        for (std::size_t t = begin; t < end; ++t) {
            const auto x = h.term_x(t);
            const auto z = h.term_z(t);
            const double c = h.coefficient(t);
            const bool anti = bits::parity_and(x, zt) != bits::parity_and(z, xt);
            if (!anti) {
                out.xs.insert(out.xs.end(), x.begin(), x.end());
                out.zs.insert(out.zs.end(), z.begin(), z.end());
                out.coeffs.push_back(c);
                continue;
            }
            // cos(a) P  - i sin(a) P*T, the product folded to canonical form.
            out.xs.insert(out.xs.end(), x.begin(), x.end());
            out.zs.insert(out.zs.end(), z.begin(), z.end());
            out.coeffs.push_back(cos_a * c);

            for (std::size_t l = 0; l < stride; ++l) {
                xp[l] = x[l] ^ xt[l];
                zp[l] = z[l] ^ zt[l];
            }
            const std::uint32_t yc = bits::popcount_and(x, z);
            const std::uint32_t ycp = bits::popcount_and(xp, zp);
            const int swap2 = bits::parity_and(z, xt) ? 2 : 0;
            // phase of -i * P * T relative to the canonical word of (xp, zp)
            const int power =
                (static_cast<int>(yc & 3) + pt + swap2 + 3 - static_cast<int>(ycp & 3)) & 3;
            if (power & 1)
                throw Error("internal: dressed term acquired an imaginary phase");
            const double sign = power == 0 ? 1.0 : -1.0;
            out.xs.insert(out.xs.end(), xp.begin(), xp.end());
            out.zs.insert(out.zs.end(), zp.begin(), zp.end());
            out.coeffs.push_back(sin_a * sign * c);
        }
    });

    std::vector<Limb> xs, zs;
    std::vector<double> coeffs;
    for (const Rows& p : partial) {
        xs.insert(xs.end(), p.xs.begin(), p.xs.end());
        zs.insert(zs.end(), p.zs.begin(), p.zs.end());
        coeffs.insert(coeffs.end(), p.coeffs.begin(), p.coeffs.end());
    }
    return QubitOperator(h.n_qubits(), std::move(xs), std::move(zs), std::move(coeffs));
}

QubitOperator dress(const QubitOperator& h, std::span<const PauliWord> t_words,
                    std::span<const double> amplitudes) {
    if (t_words.size() != amplitudes.size())
        throw ContractError("generator and amplitude counts differ");
    QubitOperator out = h;
    for (std::size_t k = 0; k < t_words.size(); ++k)
        out = dress(out, t_words[k], amplitudes[k]);
    return out;
}

CompressResult compress(const QubitOperator& op, double threshold) {
    if (threshold < 0.0)
        throw ContractError("compression threshold must be non-negative");
    std::vector<Limb> xs, zs;
    std::vector<double> coeffs;
    double removed = 0.0;
    double removed_l1 = 0.0;
    for (std::size_t t = 0; t < op.size(); ++t) {
        const double c = op.coefficient(t);
        if (std::fabs(c) < threshold) {
            removed += c * c;
            removed_l1 += std::fabs(c);
            continue;
        }
        const auto x = op.term_x(t);
        const auto z = op.term_z(t);
        xs.insert(xs.end(), x.begin(), x.end());
        zs.insert(zs.end(), z.begin(), z.end());
        coeffs.push_back(c);
    }
    return {QubitOperator(op.n_qubits(), std::move(xs), std::move(zs), std::move(coeffs)),
            removed, removed_l1};
}

}  // namespace qcc
