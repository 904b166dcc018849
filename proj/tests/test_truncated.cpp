#include "qcc/truncated.hpp"

#include "qcc/optimizer.hpp"
#include "qcc/sympoly.hpp"

#include <cmath>

#include "doctest.h"
#include "qcc/errors.hpp"
#include "qcc/oracle.hpp"
#include "test_support.hpp"

using namespace qcc;
using qcc::testing::Rng;

TEST_CASE("zero amplitudes give the reference energy at dimension one") {
    Rng rng(71);
    const std::uint32_t n = 6;
    const auto [h, pool] = qcc::testing::random_instance(rng, n, 25, 5, BasisState(n));
    const TruncatedValue v =
        evaluate_truncated(h, pool, std::vector<double>(pool.size(), 0.0), 64);
    CHECK(v.energy == doctest::Approx(pool.e0).epsilon(1e-14));
    CHECK(v.final_dim == 1);
    CHECK(v.norm_loss.empty());
}

TEST_CASE("full cap reproduces the dense ansatz energy") {
    Rng rng(72);
    for (std::uint32_t n : {6u, 10u}) {
        const std::size_t m = 9;
        const BasisState ref(n, qcc::testing::uniform_bits(rng, n));
        const auto [h, pool] = qcc::testing::random_instance(rng, n, 30, m, ref);
        const auto t = qcc::testing::random_amplitudes(rng, m, 1.4);
        const TruncatedValue v = evaluate_truncated(h, pool, t, std::size_t{1} << n);
        const double exact = oracle::dense_energy(h, pool.generators, t, ref);
        CHECK(v.energy == doctest::Approx(exact).epsilon(1e-10));
        CHECK(v.norm_loss.empty());
    }
}

TEST_CASE("cap of one keeps the dominant diagonal element") {
    Rng rng(73);
    const std::uint32_t n = 5;
    const auto [h, pool] = qcc::testing::random_instance(rng, n, 20, 4, BasisState(n));
    const auto t = qcc::testing::random_amplitudes(rng, pool.size(), 1.0);
    const SparseState s = truncated_state(pool.generators, t, pool.reference, 1);
    REQUIRE(s.size() == 1);
    const TruncatedValue v = evaluate_truncated(h, pool, t, 1);
    CHECK(v.final_dim == 1);
    CHECK(v.energy ==
          doctest::Approx(matrix_element(h, s.basis_state(0), s.basis_state(0)))
              .epsilon(1e-12));
}

TEST_CASE("norm-loss product is one exactly when no truncation fired") {
    Rng rng(74);
    const std::uint32_t n = 8;
    const auto [h, pool] = qcc::testing::random_instance(rng, n, 30, 6, BasisState(n));
    const auto t = qcc::testing::random_amplitudes(rng, pool.size(), 1.2);

    const TruncatedValue unlimited = evaluate_truncated(h, pool, t, std::size_t{1} << n);
    CHECK(unlimited.norm_loss.empty());

    const TruncatedValue tight = evaluate_truncated(h, pool, t, 8);
    double product = 1.0;
    for (double lambda : tight.norm_loss) {
        CHECK(lambda <= 1.0);
        product *= lambda;
    }
    CHECK(product <= 1.0);
    CHECK(tight.final_dim <= 8);
}

TEST_CASE("commuting single-flip generators stay inside their orbit") {
    const std::uint32_t n = 4;
    const QubitOperator h = QubitOperator::from_terms(
        n, {{PauliWord::single('X', 0, n), 0.4},
            {PauliWord::single('X', 1, n), -0.3},
            {PauliWord::single('Z', 0, n), -1.0},
            {PauliWord::single('Z', 1, n), -0.7}});
    // Repeated rotations on qubits 0 and 1 only: the reachable set is the
    // four states of that two-qubit block however many factors we apply.
    GeneratorPool pool{.generators = {},
                       .grads = {},
                       .diag_energies = {},
                       .rankings = {},
                       .reference = BasisState(n),
                       .e0 = 0.0,
                       .ranked = false};
    std::vector<double> t;
    Rng rng(75);
    for (int rep = 0; rep < 3; ++rep) {
        pool.generators.push_back(PauliWord::single('Y', 0, n));
        pool.generators.push_back(PauliWord::single('Y', 1, n));
        t.push_back(qcc::testing::uniform(rng, -1.0, 1.0));
        t.push_back(qcc::testing::uniform(rng, -1.0, 1.0));
    }
    const TruncatedValue v = evaluate_truncated(h, pool, t, unlimited_cap);
    CHECK(v.final_dim <= 4);
}

TEST_CASE("sweep: single full-cap row is exact") {
    Rng rng(76);
    const std::uint32_t n = 6;
    const auto [h, pool] = qcc::testing::random_instance(rng, n, 25, 6, BasisState(n));
    const auto t = qcc::testing::random_amplitudes(rng, pool.size(), 1.0);
    const std::vector<std::size_t> caps{std::size_t{1} << n};
    const auto rows = sweep_truncated(h, pool, t, caps);
    REQUIRE(rows.size() == 1);
    const double exact = oracle::dense_energy(h, pool.generators, t, pool.reference);
    CHECK(rows[0].energy == doctest::Approx(exact).epsilon(1e-10));
    CHECK(rows[0].cumulative_norm_loss == 0.0);
    CHECK(rows[0].cap == caps[0]);
    CHECK(rows[0].seconds >= 0.0);
}

TEST_CASE("sweep: empty cap list gives an empty table") {
    Rng rng(77);
    const std::uint32_t n = 4;
    const auto [h, pool] = qcc::testing::random_instance(rng, n, 15, 3, BasisState(n));
    const auto rows =
        sweep_truncated(h, pool, std::vector<double>(pool.size(), 0.1), {});
    CHECK(rows.empty());
}

TEST_CASE("both energy engines agree on an 80-qubit block") {
    // No dense reference fits here; the polynomial engine at full order and
    // the untruncated expansion engine are independent routes to the same
    // number.
    const std::uint32_t n = 80;
    const QubitOperator h = QubitOperator::from_terms(
        n, {{PauliWord::single('Z', 70, n), -1.0},
            {PauliWord::single('Z', 75, n), -0.8},
            {PauliWord::single('Z', 79, n), -0.6},
            {PauliWord::parse("X70 X75", n), 0.2},
            {PauliWord::parse("X75 X79", n), -0.15},
            {PauliWord::parse("X70 X79", n), 0.1}});
    const GeneratorPool pool = rank(propose_generators(h, BasisState(n)));
    REQUIRE(pool.size() == 3);
    const std::vector<double> t{0.35, -0.2, 0.55};

    const CompiledAnsatz a =
        CompiledAnsatz::compile(h, pool, static_cast<std::uint32_t>(pool.size()));
    const double ek = a.evaluate(t).energy;
    const TruncatedValue fn = evaluate_truncated(h, pool, t, unlimited_cap);
    CHECK(ek == doctest::Approx(fn.energy).epsilon(1e-13));
}

TEST_CASE("16-qubit workflow: optimize at low order, refine by cap sweep") {
    Rng rng(80);
    const std::uint32_t n = 16;
    const BasisState ref(n);
    const QubitOperator h = qcc::testing::weak_instance(rng, n, 120, 0.15);
    GeneratorPool pool = rank(propose_generators(h, ref));
    REQUIRE(pool.size() >= 14);
    pool = qcc::testing::top_slice(pool, 14);

    const CompiledAnsatz order2 = CompiledAnsatz::compile(h, pool, 2);
    const auto res = minimize(
        [&](std::span<const double> t, std::span<double> g) {
            return order2.evaluate(t, g).energy;
        },
        std::vector<double>(pool.size(), 0.0), {});
    REQUIRE(res.converged);
    CHECK(res.e_opt < pool.e0);

    // At the optimized amplitudes the two engines are independent exact
    // routes (full order vs unlimited cap) and must agree.
    const CompiledAnsatz full =
        CompiledAnsatz::compile(h, pool, static_cast<std::uint32_t>(pool.size()));
    const double exact = full.evaluate(res.t_opt).energy;
    const TruncatedValue fn = evaluate_truncated(h, pool, res.t_opt, unlimited_cap);
    CHECK(fn.energy == doctest::Approx(exact).epsilon(1e-11));
    CHECK(fn.final_dim <= std::size_t{1} << 14);

    // capped sweeps straddle the exact value and land on it at full cap
    std::vector<std::size_t> caps{64, 512, fn.final_dim};
    const auto rows = sweep_truncated(h, pool, res.t_opt, caps);
    CHECK(rows.back().energy == doctest::Approx(exact).epsilon(1e-11));
    CHECK(std::fabs(rows[1].energy - exact) <= std::fabs(rows[0].energy - exact) + 1e-12);
}

TEST_CASE("doubling caps: error shrinks toward the exact energy") {
    // One-sided convergence shows up in the weakly correlated regime the
    // extrapolation protocol targets: diagonal-dominant H, small amplitudes.
    Rng rng(78);
    const std::uint32_t n = 10;
    const BasisState ref(n);
    int monotone = 0, trials = 10;
    for (int trial = 0; trial < trials; ++trial) {
        const std::size_t m = 30;
        const QubitOperator h = qcc::testing::weak_instance(rng, n, 40, 0.1);
        GeneratorPool pool = rank(propose_generators(h, ref));
        if (pool.size() < m) {
            --trial;
            continue;
        }
        pool = qcc::testing::top_slice(pool, m);
        const auto t = qcc::testing::random_amplitudes(rng, m, 0.2);
        const double exact = oracle::dense_energy(h, pool.generators, t, ref);

        std::vector<std::size_t> caps;
        for (std::size_t c = 16; c <= (std::size_t{1} << n); c *= 2)
            caps.push_back(c);
        const auto rows = sweep_truncated(h, pool, t, caps);
        bool ok = true;
        for (std::size_t i = 1; i < rows.size(); ++i) {
            if (std::fabs(rows[i].energy - exact) >
                std::fabs(rows[i - 1].energy - exact) + 1e-12)
                ok = false;
        }
        monotone += ok;
        CHECK(std::fabs(rows.back().energy - exact) < 1e-9);
    }
    CHECK(monotone >= (9 * trials) / 10);
}
