#include "qcc/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "qcc/errors.hpp"
#include "qcc/parallel.hpp"

namespace qcc {

namespace {

// Degenerate rankings are rankings equal after rounding to 1e-11.
std::int64_t rounded_ranking(double r) {
    return std::llround(r * 1e11);
}

void check_imaginary(const PauliWord& t_word) {
    if (!is_imaginary_generator(t_word))
        throw ContractError("generator must contain an odd number of y factors: " +
                            t_word.to_string());
}

}  // namespace

double GeneratorPool::max_ranking() const {
    return rankings.empty() ? 0.0 : *std::max_element(rankings.begin(), rankings.end());
}

double gradient(const QubitOperator& h, const PauliWord& t_word, const BasisState& reference) {
    check_imaginary(t_word);
    // -(i/2)<0|[H,T]|0> collapses to a signed matrix element:
    // T|0> = phi |0 xor x>, phi = +-i, and the commutator pairs the element
    // with its conjugate, leaving -i*phi * Re<0|H|0 xor x>.
    const BasisState flipped = reference.flipped(t_word.x_mask());
    const int power = (t_word.phase_power() + 3) & 3;  // i^(p-1), real for odd p
    double sign = power == 0 ? 1.0 : -1.0;
    if (bits::parity_and(t_word.z_mask(), reference.limbs()))
        sign = -sign;
    return sign * matrix_element(h, reference, flipped);
}

double diag_energy(const QubitOperator& h, const PauliWord& t_word,
                   const BasisState& reference) {
    check_imaginary(t_word);
    const BasisState flipped = reference.flipped(t_word.x_mask());
    return matrix_element(h, flipped, flipped);
}

GeneratorPool propose_generators(const QubitOperator& h, const BasisState& reference) {
    if (h.empty())
        throw ContractError("cannot propose generators for an empty operator");
    if (h.n_qubits() != reference.n_qubits())
        throw DimensionError("reference width does not match operator");

    GeneratorPool pool{.generators = {},
                       .grads = {},
                       .diag_energies = {},
                       .rankings = {},
                       .reference = reference,
                       .e0 = matrix_element(h, reference, reference),
                       .ranked = false};

    const std::uint32_t n = h.n_qubits();
    for (std::size_t g = 0; g < h.group_count(); ++g) {
        const auto x = h.group_x(g);
        if (bits::is_zero(x))
            continue;
        // One generator per flip pattern: y on the lowest set bit, x on the
        // rest. Any odd-y placement reaches the same flipped state.
        std::vector<Limb> z(h.stride(), 0);
        bits::set(z, bits::lowest_set_bit(x), true);
        pool.generators.emplace_back(n, std::vector<Limb>(x.begin(), x.end()), std::move(z), 1);
    }

    pool.grads.resize(pool.size());
    pool.diag_energies.resize(pool.size());
    parallel_for(pool.size(), [&](std::size_t k) {
        pool.grads[k] = gradient(h, pool.generators[k], reference);
        pool.diag_energies[k] = diag_energy(h, pool.generators[k], reference);
    });
    return pool;
}

GeneratorPool rank(const GeneratorPool& pool, RankingMode mode) {
    if (pool.grads.size() != pool.size() || pool.diag_energies.size() != pool.size())
        throw ContractError("pool gradients and diagonal energies must be populated");

    std::vector<double> r(pool.size());
    if (mode == RankingMode::gradient_ratio) {
        for (std::size_t k = 0; k < pool.size(); ++k) {
            const double g = pool.grads[k];
            const double d = pool.e0 - pool.diag_energies[k];
            if (g == 0.0)
                r[k] = 0.0;
            else if (d == 0.0)
                r[k] = std::numbers::pi / 2;
            else
                r[k] = std::atan(std::fabs(2.0 * g / d));
        }
    } else {
        const DHASolution sol = dha_solve(pool);
        for (std::size_t k = 0; k < pool.size(); ++k)
            r[k] = std::fabs(sol.t[k]);
    }

    std::vector<std::uint32_t> order(pool.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        const std::int64_t ra = rounded_ranking(r[a]);
        const std::int64_t rb = rounded_ranking(r[b]);
        if (ra != rb)
            return ra > rb;
        return bits::compare(pool.generators[a].x_mask(), pool.generators[b].x_mask()) < 0;
    });

    GeneratorPool out{.generators = {},
                      .grads = {},
                      .diag_energies = {},
                      .rankings = {},
                      .reference = pool.reference,
                      .e0 = pool.e0,
                      .ranked = true};
    out.generators.reserve(pool.size());
    for (std::uint32_t i : order) {
        out.generators.push_back(pool.generators[i]);
        out.grads.push_back(pool.grads[i]);
        out.diag_energies.push_back(pool.diag_energies[i]);
        out.rankings.push_back(r[i]);
    }
    return out;
}

GeneratorPool select(const GeneratorPool& pool, std::size_t m, SelectPolicy policy) {
    if (m < 1)
        throw ContractError("selection size must be at least 1");
    if (!pool.ranked)
        throw ContractError("pool must be ranked before selection");
    std::size_t take = std::min(m, pool.size());
    if (take < pool.size()) {
        // Never split a degenerate group: move the cut to a group boundary.
        const auto same_group = [&](std::size_t a, std::size_t b) {
            return rounded_ranking(pool.rankings[a]) == rounded_ranking(pool.rankings[b]);
        };
        if (same_group(take - 1, take)) {
            if (policy == SelectPolicy::extend) {
                while (take < pool.size() && same_group(take - 1, take))
                    ++take;
            } else {
                while (take > 0 && same_group(take - 1, take))
                    --take;
                if (take == 0)
                    throw ContractError(
                        "shrink policy would select no generators: the top group is larger "
                        "than the requested size");
            }
        }
    }

    GeneratorPool out{.generators = {pool.generators.begin(), pool.generators.begin() + take},
                      .grads = {pool.grads.begin(), pool.grads.begin() + take},
                      .diag_energies =
                          {pool.diag_energies.begin(), pool.diag_energies.begin() + take},
                      .rankings = {pool.rankings.begin(), pool.rankings.begin() + take},
                      .reference = pool.reference,
                      .e0 = pool.e0,
                      .ranked = true};
    return out;
}

DHASolution dha_solve(const GeneratorPool& pool, double tol) {
    if (pool.grads.size() != pool.size() || pool.diag_energies.size() != pool.size())
        throw ContractError("pool gradients and diagonal energies must be populated");
    if (tol <= 0.0)
        throw ContractError("tolerance must be positive");

    const std::size_t m = pool.size();
    DHASolution sol;
    sol.c.assign(m, 0.0);
    sol.t.assign(m, 0.0);

    // Coupled entries only; zero-gradient rows decouple exactly.
    double upper = pool.e0;
    double min_diag = pool.e0;
    double coupling_sum = 0.0;
    bool any_coupling = false;
    for (std::size_t k = 0; k < m; ++k) {
        min_diag = std::min(min_diag, pool.diag_energies[k]);
        if (pool.grads[k] != 0.0) {
            any_coupling = true;
            upper = std::min(upper, pool.diag_energies[k]);
            coupling_sum += std::fabs(pool.grads[k]);
        }
    }
    if (!any_coupling) {
        sol.energy = pool.e0;
        return sol;
    }

    const auto secular = [&](double e, double& f, double& df) {
        f = pool.e0 - e;
        df = -1.0;
        for (std::size_t k = 0; k < m; ++k) {
            const double g = pool.grads[k];
            if (g == 0.0)
                continue;
            const double inv = 1.0 / (e - pool.diag_energies[k]);
            f += g * g * inv;
            df -= g * g * inv * inv;
        }
    };

    // The lowest reference-coupled root lies in (lo, hi): hi is the smallest
    // coupled diagonal entry (or e0), lo a Gershgorin-style bound.
    double lo = min_diag - coupling_sum;
    double hi = upper;
    double e = 0.5 * (lo + hi);
    const std::size_t max_iterations = 200;
    double f = 0.0, df = 0.0;
    std::size_t it = 0;
    for (; it < max_iterations; ++it) {
        secular(e, f, df);
        if (f > 0.0)
            lo = e;
        else if (f < 0.0)
            hi = e;
        else
            break;
        double next = e - f / df;  // df < 0 everywhere on the bracket
        if (!(next > lo && next < hi))
            next = 0.5 * (lo + hi);
        const double delta = std::fabs(next - e);
        e = next;
        if (delta < tol)
            break;
    }
    if (it == max_iterations)
        throw ConvergenceError("arrowhead eigenvalue iteration did not reach tolerance " +
                                   std::to_string(tol),
                               e);

    sol.energy = e;
    sol.iterations = it + 1;
    for (std::size_t k = 0; k < m; ++k) {
        const double g = pool.grads[k];
        sol.c[k] = g == 0.0 ? 0.0 : g / (e - pool.diag_energies[k]);
        sol.t[k] = 2.0 * std::atan(sol.c[k]);
    }
    return sol;
}

}  // namespace qcc
