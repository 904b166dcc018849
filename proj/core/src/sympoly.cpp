#include "qcc/sympoly.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <istream>
#include <numeric>
#include <ostream>

#include "qcc/errors.hpp"
#include "qcc/parallel.hpp"

namespace qcc {

namespace {

constexpr double kInstabilityFloor = 1e-12;  // |cos(t/2)| below this is an error
constexpr double kFallbackFloor = 1e-4;      // switch to the sin/cos product form
constexpr std::size_t kRowGrain = 128;

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r = 0;
    if (__builtin_add_overflow(a, b, &r))
        throw CapacityError("term count overflows 64 bits");
    return r;
}

std::uint64_t binomial_checked(std::uint32_t m, std::uint32_t j) {
    // C(m, j) via the multiplicative recurrence; exact at every step.
    std::uint64_t c = 1;
    for (std::uint32_t i = 1; i <= j; ++i) {
        std::uint64_t hi = 0;
        const std::uint64_t factor = std::uint64_t{m} - i + 1;
        if (__builtin_mul_overflow(c, factor, &hi))
            throw CapacityError("binomial coefficient overflows 64 bits");
        c = hi / i;
    }
    return c;
}

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

constexpr std::uint64_t kFnvSeed = 0xcbf29ce484222325ull;

template <typename T>
void write_pod(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
void write_vec(std::ostream& out, const std::vector<T>& v) {
    write_pod(out, static_cast<std::uint64_t>(v.size()));
    out.write(reinterpret_cast<const char*>(v.data()), v.size() * sizeof(T));
}

template <typename T>
void read_pod(std::istream& in, T& v) {
    in.read(reinterpret_cast<char*>(&v), sizeof v);
}

template <typename T>
void read_vec(std::istream& in, std::vector<T>& v) {
    std::uint64_t n = 0;
    read_pod(in, n);
    v.resize(n);
    in.read(reinterpret_cast<char*>(v.data()), n * sizeof(T));
}

}  // namespace

std::uint64_t count_terms(std::uint32_t m, std::uint32_t k) {
    if (k > m)
        throw ContractError("order exceeds generator count");
    std::uint64_t total = 0;
    for (std::uint32_t j = 0; j <= k; ++j)
        total = checked_add(total, binomial_checked(m, j));
    return total;
}

std::uint64_t content_hash(const QubitOperator& op) {
    std::uint64_t h = kFnvSeed;
    const std::uint32_t n = op.n_qubits();
    h = fnv1a(h, &n, sizeof n);
    for (std::size_t t = 0; t < op.size(); ++t) {
        const auto x = op.term_x(t);
        const auto z = op.term_z(t);
        const double c = op.coefficient(t);
        h = fnv1a(h, x.data(), x.size_bytes());
        h = fnv1a(h, z.data(), z.size_bytes());
        h = fnv1a(h, &c, sizeof c);
    }
    return h;
}

std::uint64_t content_hash(std::span<const PauliWord> words) {
    std::uint64_t h = kFnvSeed;
    for (const PauliWord& w : words) {
        const auto x = w.x_mask();
        const auto z = w.z_mask();
        const int p = w.phase_power();
        h = fnv1a(h, x.data(), x.size_bytes());
        h = fnv1a(h, z.data(), z.size_bytes());
        h = fnv1a(h, &p, sizeof p);
    }
    return h;
}

std::string ansatz_cache_key(const QubitOperator& h, std::span<const PauliWord> generators,
                             std::uint32_t k) {
    char key[64];
    std::snprintf(key, sizeof key, "%016llx-%016llx-%02u",
                  static_cast<unsigned long long>(content_hash(h)),
                  static_cast<unsigned long long>(content_hash(generators)), k);
    return key;
}

BasisState CompiledAnsatz::unique_state(std::size_t slot) const {
    const std::span<const Limb> k{&states_[slot * state_stride_], state_stride_};
    return BasisState(n_qubits_, std::vector<Limb>(k.begin(), k.end()));
}

CompiledAnsatz CompiledAnsatz::compile(const QubitOperator& h, const GeneratorPool& pool,
                                       std::uint32_t k, std::size_t term_cap) {
    const std::uint32_t m = static_cast<std::uint32_t>(pool.size());
    if (k > m)
        throw ContractError("order exceeds generator count");
    if (h.n_qubits() != pool.reference.n_qubits())
        throw DimensionError("reference width does not match operator");
    for (const PauliWord& t : pool.generators) {
        if (t.n_qubits() != h.n_qubits())
            throw DimensionError("generator width does not match operator");
        if (!is_imaginary_generator(t))
            throw ContractError("generator must contain an odd number of y factors: " +
                                t.to_string());
    }
    const std::uint64_t n_terms = count_terms(m, k);
    if (n_terms > term_cap)
        throw CapacityError("order-" + std::to_string(k) + " expansion needs " +
                            std::to_string(n_terms) + " terms, above the cap of " +
                            std::to_string(term_cap));

    CompiledAnsatz a;
    a.order_ = k;
    a.m_ = m;
    a.n_qubits_ = h.n_qubits();
    a.reference_ = pool.reference;
    a.state_stride_ = bits::limb_count(h.n_qubits());
    const std::size_t stride = a.state_stride_;

    // Subset enumeration in lexicographic order of increasing size. Each
    // term's product word grows from its parent by one factor of -iT_last,
    // tracked as flat (x, z) rows plus a quarter phase.
    a.parent_.reserve(n_terms);
    a.last_.reserve(n_terms);
    a.signs_.reserve(n_terms);
    std::vector<Limb> term_x(n_terms * stride, 0);
    std::vector<Limb> term_z(n_terms * stride, 0);
    std::vector<std::int8_t> term_phase(n_terms, 0);  // power of i, even values only

    a.parent_.push_back(0);
    a.last_.push_back(0);
    std::size_t size_begin = 0;  // first index of the previous size block
    std::size_t produced = 1;
    for (std::uint32_t r = 1; r <= k; ++r) {
        const std::size_t size_end = produced;
        for (std::size_t p = size_begin; p < size_end; ++p) {
            // Trailing generator indices strictly above the parent's last.
            const std::uint16_t first = (r == 1) ? 0 : static_cast<std::uint16_t>(a.last_[p] + 1);
            for (std::uint16_t e = first; e < m; ++e) {
                const std::size_t q = produced++;
                a.parent_.push_back(static_cast<std::uint32_t>(p));
                a.last_.push_back(e);
                const PauliWord& t = pool.generators[e];
                const std::span<const Limb> px{&term_x[p * stride], stride};
                const std::span<const Limb> pz{&term_z[p * stride], stride};
                std::span<Limb> qx{&term_x[q * stride], stride};
                std::span<Limb> qz{&term_z[q * stride], stride};
                const int swap2 = bits::parity_and(pz, t.x_mask()) ? 2 : 0;
                for (std::size_t l = 0; l < stride; ++l) {
                    qx[l] = px[l] ^ t.x_mask()[l];
                    qz[l] = pz[l] ^ t.z_mask()[l];
                }
                // parent * (-i T_e): -i T = i^{p+3} X Z
                term_phase[q] = static_cast<std::int8_t>(
                    (static_cast<int>(term_phase[p]) + t.phase_power() + 3 + swap2) & 3);
            }
        }
        size_begin = size_end;
    }
    if (produced != n_terms)
        throw Error("internal: subset enumeration produced a wrong term count");

    // Fold the factorization phase and the reference z-eigenvalue into +-1.
    a.signs_.resize(n_terms);
    for (std::size_t q = 0; q < n_terms; ++q) {
        const int phase = term_phase[q];
        if (phase & 1)
            throw ContractError(
                "subset product acquired an imaginary phase; a generator has an even "
                "y count");
        double sign = phase == 0 ? 1.0 : -1.0;
        if (bits::parity_and({&term_z[q * stride], stride}, pool.reference.limbs()))
            sign = -sign;
        a.signs_[q] = static_cast<std::int8_t>(sign);
    }

    // Flip each product's x part onto the reference and dedupe the states.
    std::vector<Limb> flipped(n_terms * stride);
    for (std::size_t q = 0; q < n_terms; ++q)
        for (std::size_t l = 0; l < stride; ++l)
            flipped[q * stride + l] = term_x[q * stride + l] ^ pool.reference.limbs()[l];

    std::vector<std::uint32_t> order(n_terms);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::uint32_t lhs, std::uint32_t rhs) {
        return bits::compare({&flipped[lhs * stride], stride},
                             {&flipped[rhs * stride], stride}) < 0;
    });

    a.slots_.resize(n_terms);
    for (std::size_t i = 0; i < n_terms; ++i) {
        const std::uint32_t q = order[i];
        const std::span<const Limb> key{&flipped[q * stride], stride};
        if (a.states_.empty() ||
            !bits::equal({&a.states_[a.states_.size() - stride], stride}, key))
            a.states_.insert(a.states_.end(), key.begin(), key.end());
        a.slots_[q] = static_cast<std::uint32_t>(a.states_.size() / stride - 1);
    }
    a.hessian_dim_ = a.states_.size() / stride;

    // Operator matrix over the unique states, one sparse row per state.
    const std::size_t dim = a.hessian_dim_;
    std::vector<std::vector<std::pair<std::uint32_t, double>>> rows(dim);
    const std::size_t chunks = (dim + kRowGrain - 1) / kRowGrain;
    parallel_for(chunks, [&](std::size_t chunk) {
        const std::size_t begin = chunk * kRowGrain;
        const std::size_t end = std::min(dim, begin + kRowGrain);
        std::vector<Limb> target(stride);
        for (std::size_t r = begin; r < end; ++r) {
            const std::span<const Limb> wr{&a.states_[r * stride], stride};
            for (std::size_t g = 0; g < h.group_count(); ++g) {
                const auto gx = h.group_x(g);
                for (std::size_t l = 0; l < stride; ++l)
                    target[l] = wr[l] ^ gx[l];
                // binary search the sorted unique states
                std::size_t lo = 0, hi_idx = dim;
                while (lo < hi_idx) {
                    const std::size_t mid = lo + (hi_idx - lo) / 2;
                    const int cmp =
                        bits::compare({&a.states_[mid * stride], stride}, target);
                    if (cmp == 0) {
                        lo = mid;
                        break;
                    }
                    if (cmp < 0)
                        lo = mid + 1;
                    else
                        hi_idx = mid;
                }
                if (lo >= dim ||
                    !bits::equal({&a.states_[lo * stride], stride}, target))
                    continue;
                const std::span<const Limb> wc{&a.states_[lo * stride], stride};
                double val = 0.0;
                for (std::size_t t = h.group_begin(g); t < h.group_end(g); ++t) {
                    const int zs = h.zsign(t);
                    if (zs == 0)
                        continue;
                    const double zsgn = bits::parity_and(h.term_z(t), wc) ? -1.0 : 1.0;
                    val += static_cast<double>(zs) * zsgn * h.coefficient(t);
                }
                if (val != 0.0)
                    rows[r].emplace_back(static_cast<std::uint32_t>(lo), val);
            }
        }
    });

    a.hess_rows_.assign(dim + 1, 0);
    for (std::size_t r = 0; r < dim; ++r)
        a.hess_rows_[r + 1] = a.hess_rows_[r] + rows[r].size();
    a.hess_cols_.reserve(a.hess_rows_[dim]);
    a.hess_vals_.reserve(a.hess_rows_[dim]);
    for (std::size_t r = 0; r < dim; ++r) {
        for (const auto& [col, val] : rows[r]) {
            a.hess_cols_.push_back(col);
            a.hess_vals_.push_back(val);
        }
    }

    a.cache_key_ = ansatz_cache_key(h, pool.generators, k);
    return a;
}

struct CompiledAnsatz::TrigTables {
    std::vector<double> tan_half;
    std::vector<double> sin_half;
    std::vector<double> cos_half;
    double cos_product = 1.0;
    bool fallback = false;

    explicit TrigTables(std::span<const double> t) {
        const std::size_t m = t.size();
        tan_half.resize(m);
        sin_half.resize(m);
        cos_half.resize(m);
        double min_cos = 1.0;
        for (std::size_t j = 0; j < m; ++j) {
            sin_half[j] = std::sin(t[j] / 2);
            cos_half[j] = std::cos(t[j] / 2);
            min_cos = std::min(min_cos, std::fabs(cos_half[j]));
            cos_product *= cos_half[j];
        }
        if (min_cos < kInstabilityFloor)
            throw NumericalError(
                "reference instability: an amplitude reached +-pi (cos(t/2) ~ 0)");
        fallback = min_cos < kFallbackFloor;
        for (std::size_t j = 0; j < m; ++j)
            tan_half[j] = sin_half[j] / cos_half[j];
    }
};

void CompiledAnsatz::build_amplitudes(const TrigTables& trig, std::vector<double>& kappa,
                                      std::vector<double>& u) const {
    const std::size_t n_terms = term_count();
    kappa.assign(n_terms, 0.0);
    u.assign(hessian_dim_, 0.0);

    if (!trig.fallback) {
        kappa[0] = trig.cos_product;
        for (std::size_t q = 1; q < n_terms; ++q)
            kappa[q] = kappa[parent_[q]] * trig.tan_half[last_[q]];
    } else {
        // Near |t| = pi the tan products overflow; rebuild each term as an
        // explicit sin/cos product over all axes.
        std::vector<std::uint16_t> subset(order_);
        std::vector<bool> member(m_);
        for (std::size_t q = 0; q < n_terms; ++q) {
            std::size_t len = 0;
            for (std::size_t w = q; w != 0; w = parent_[w])
                subset[len++] = last_[w];
            std::fill(member.begin(), member.end(), false);
            for (std::size_t i = 0; i < len; ++i)
                member[subset[i]] = true;
            double c = 1.0;
            for (std::size_t j = 0; j < m_; ++j)
                c *= member[j] ? trig.sin_half[j] : trig.cos_half[j];
            kappa[q] = c;
        }
    }

    for (std::size_t q = 0; q < n_terms; ++q)
        u[slots_[q]] += static_cast<double>(signs_[q]) * kappa[q];
}

void CompiledAnsatz::apply_hessian(std::span<const double> u, std::span<double> hu) const {
    const std::size_t dim = hessian_dim_;
    const std::size_t chunks = (dim + kRowGrain - 1) / kRowGrain;
    parallel_for(chunks, [&](std::size_t chunk) {
        const std::size_t begin = chunk * kRowGrain;
        const std::size_t end = std::min(dim, begin + kRowGrain);
        for (std::size_t r = begin; r < end; ++r) {
            double acc = 0.0;
            for (std::size_t i = hess_rows_[r]; i < hess_rows_[r + 1]; ++i)
                acc += hess_vals_[i] * u[hess_cols_[i]];
            hu[r] = acc;
        }
    });
}

CompiledAnsatz::Value CompiledAnsatz::evaluate(std::span<const double> t) const {
    if (t.size() != m_)
        throw ContractError("amplitude count does not match generator count");
    const TrigTables trig(t);
    std::vector<double> kappa, u;
    build_amplitudes(trig, kappa, u);
    std::vector<double> hu(hessian_dim_);
    apply_hessian(u, hu);

    double numerator = 0.0, norm = 0.0;
    for (std::size_t s = 0; s < hessian_dim_; ++s) {
        numerator += u[s] * hu[s];
        norm += u[s] * u[s];
    }
    return {numerator / norm, numerator, norm};
}

CompiledAnsatz::Value CompiledAnsatz::evaluate(std::span<const double> t,
                                               std::span<double> grad) const {
    if (t.size() != m_)
        throw ContractError("amplitude count does not match generator count");
    if (grad.size() != m_)
        throw ContractError("gradient span size does not match generator count");
    const TrigTables trig(t);
    std::vector<double> kappa, u;
    build_amplitudes(trig, kappa, u);
    std::vector<double> hu(hessian_dim_);
    apply_hessian(u, hu);

    double numerator = 0.0, norm = 0.0;
    for (std::size_t s = 0; s < hessian_dim_; ++s) {
        numerator += u[s] * hu[s];
        norm += u[s] * u[s];
    }
    const double energy = numerator / norm;

    const std::size_t n_terms = term_count();
    std::vector<std::uint16_t> subset(order_);
    std::vector<double> pref(order_ + 1), suf(order_ + 1);

    if (!trig.fallback) {
        // d/dt_k of the tan-product representation: terms containing k use
        // the product with tan_k stripped, the rest pick up -tan_k; both
        // fold into grad_k = (1 + tan_k^2) (G1_k - E B_k) / norm.
        std::vector<double> g1(m_, 0.0), b(m_, 0.0);
        for (std::size_t q = 0; q < n_terms; ++q) {
            std::size_t len = 0;
            for (std::size_t w = q; w != 0; w = parent_[w])
                subset[len++] = last_[w];
            if (len == 0)
                continue;
            std::reverse(subset.begin(), subset.begin() + static_cast<std::ptrdiff_t>(len));
            pref[0] = 1.0;
            for (std::size_t i = 0; i < len; ++i)
                pref[i + 1] = pref[i] * trig.tan_half[subset[i]];
            suf[len] = 1.0;
            for (std::size_t i = len; i-- > 0;)
                suf[i] = suf[i + 1] * trig.tan_half[subset[i]];
            const double base = static_cast<double>(signs_[q]) * trig.cos_product;
            const double xh = hu[slots_[q]];
            const double xu = u[slots_[q]];
            for (std::size_t i = 0; i < len; ++i) {
                const double tau = base * pref[i] * suf[i + 1];
                g1[subset[i]] += tau * xh;
                b[subset[i]] += tau * xu;
            }
        }
        for (std::size_t j = 0; j < m_; ++j) {
            const double tj = trig.tan_half[j];
            grad[j] = (1.0 + tj * tj) * (g1[j] - energy * b[j]) / norm;
        }
    } else {
        // Fallback: differentiate the explicit sin/cos product per axis.
        std::vector<double> dnum(m_, 0.0), dden(m_, 0.0);
        std::vector<bool> member(m_);
        std::vector<double> apref(m_ + 1), asuf(m_ + 1);
        for (std::size_t q = 0; q < n_terms; ++q) {
            std::size_t len = 0;
            for (std::size_t w = q; w != 0; w = parent_[w])
                subset[len++] = last_[w];
            std::fill(member.begin(), member.end(), false);
            for (std::size_t i = 0; i < len; ++i)
                member[subset[i]] = true;
            apref[0] = 1.0;
            for (std::size_t j = 0; j < m_; ++j)
                apref[j + 1] = apref[j] * (member[j] ? trig.sin_half[j] : trig.cos_half[j]);
            asuf[m_] = 1.0;
            for (std::size_t j = m_; j-- > 0;)
                asuf[j] = asuf[j + 1] * (member[j] ? trig.sin_half[j] : trig.cos_half[j]);
            const double sgn = static_cast<double>(signs_[q]);
            const double xh = hu[slots_[q]];
            const double xu = u[slots_[q]];
            for (std::size_t j = 0; j < m_; ++j) {
                const double dfac =
                    member[j] ? 0.5 * trig.cos_half[j] : -0.5 * trig.sin_half[j];
                const double d = sgn * apref[j] * dfac * asuf[j + 1];
                dnum[j] += d * xh;
                dden[j] += d * xu;
            }
        }
        for (std::size_t j = 0; j < m_; ++j)
            grad[j] = 2.0 * (dnum[j] - energy * dden[j]) / norm;
    }

    return {energy, numerator, norm};
}

std::vector<double> CompiledAnsatz::gradient(std::span<const double> t) const {
    std::vector<double> g(m_);
    evaluate(t, g);
    return g;
}

namespace {
constexpr char kCacheMagic[8] = {'Q', 'C', 'C', 'A', 'N', 'S', 'Z', '1'};
}

void CompiledAnsatz::save(std::ostream& out) const {
    out.write(kCacheMagic, sizeof kCacheMagic);
    write_pod(out, order_);
    write_pod(out, m_);
    write_pod(out, n_qubits_);
    const std::vector<Limb> ref(reference_.limbs().begin(), reference_.limbs().end());
    write_vec(out, ref);
    write_vec(out, parent_);
    write_vec(out, last_);
    write_vec(out, signs_);
    write_vec(out, slots_);
    write_pod(out, static_cast<std::uint64_t>(state_stride_));
    write_vec(out, states_);
    write_pod(out, static_cast<std::uint64_t>(hessian_dim_));
    write_vec(out, hess_rows_);
    write_vec(out, hess_cols_);
    write_vec(out, hess_vals_);
    write_pod(out, static_cast<std::uint64_t>(cache_key_.size()));
    out.write(cache_key_.data(), static_cast<std::streamsize>(cache_key_.size()));
}

CompiledAnsatz CompiledAnsatz::load(std::istream& in) {
    char magic[8];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kCacheMagic, sizeof magic) != 0)
        throw ParseError("not a compiled-ansatz cache file");
    CompiledAnsatz a;
    read_pod(in, a.order_);
    read_pod(in, a.m_);
    read_pod(in, a.n_qubits_);
    std::vector<Limb> ref;
    read_vec(in, ref);
    a.reference_ = BasisState(a.n_qubits_, std::move(ref));
    read_vec(in, a.parent_);
    read_vec(in, a.last_);
    read_vec(in, a.signs_);
    read_vec(in, a.slots_);
    std::uint64_t v = 0;
    read_pod(in, v);
    a.state_stride_ = v;
    read_vec(in, a.states_);
    read_pod(in, v);
    a.hessian_dim_ = v;
    read_vec(in, a.hess_rows_);
    read_vec(in, a.hess_cols_);
    read_vec(in, a.hess_vals_);
    read_pod(in, v);
    a.cache_key_.resize(v);
    in.read(a.cache_key_.data(), static_cast<std::streamsize>(v));
    if (!in)
        throw ParseError("truncated compiled-ansatz cache file");
    const std::size_t n_terms = a.signs_.size();
    if (a.parent_.size() != n_terms || a.last_.size() != n_terms ||
        a.slots_.size() != n_terms || a.hess_rows_.size() != a.hessian_dim_ + 1 ||
        a.hess_cols_.size() != a.hess_vals_.size() ||
        a.states_.size() != a.hessian_dim_ * a.state_stride_)
        throw ParseError("inconsistent compiled-ansatz cache file");
    return a;
}

}  // namespace qcc
