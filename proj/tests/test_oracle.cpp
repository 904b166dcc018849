#include "qcc/oracle.hpp"

#include <cmath>

#include "doctest.h"
#include "qcc/errors.hpp"
#include "test_support.hpp"

using namespace qcc;
using qcc::testing::Rng;

TEST_CASE("dense_state: zero amplitudes give the reference unit vector") {
    const BasisState ref(3, 5);
    const Eigen::VectorXcd v =
        oracle::dense_state(std::vector<PauliWord>{PauliWord::single('Y', 0, 3)},
                            std::vector<double>{0.0}, ref);
    CHECK(std::abs(v[5] - std::complex<double>(1, 0)) == 0.0);
    CHECK(v.norm() == 1.0);
}

TEST_CASE("dense_state stays normalized") {
    Rng rng(101);
    const std::uint32_t n = 8;
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<PauliWord> gens;
        std::vector<double> t;
        for (int k = 0; k < 6; ++k) {
            gens.push_back(qcc::testing::random_generator(rng, n));
            t.push_back(qcc::testing::uniform(rng, -2.0, 2.0));
        }
        const Eigen::VectorXcd v = oracle::dense_state(gens, t, BasisState(n));
        CHECK(std::fabs(v.norm() - 1.0) < 1e-13);
    }
}

TEST_CASE("single-qubit closed form: energy and gradient of cos(t)") {
    const std::uint32_t n = 1;
    const QubitOperator z0 = QubitOperator::from_terms(n, {{PauliWord::single('Z', 0, n), 1.0}});
    const std::vector<PauliWord> gens{PauliWord::single('Y', 0, n)};
    for (double t : {-1.3, 0.0, 0.2, 2.2}) {
        CHECK(oracle::dense_energy(z0, gens, std::vector<double>{t}, BasisState(n)) ==
              doctest::Approx(std::cos(t)).epsilon(1e-14));
        const auto grad =
            oracle::dense_gradient(z0, gens, std::vector<double>{t}, BasisState(n));
        CHECK(grad[0] == doctest::Approx(-std::sin(t)).epsilon(1e-13).scale(1.0));
    }
}

TEST_CASE("dense_gradient matches finite differences") {
    Rng rng(102);
    const std::uint32_t n = 6;
    const auto [h, pool] = qcc::testing::random_instance(rng, n, 20, 5, BasisState(n));
    const auto t = qcc::testing::random_amplitudes(rng, pool.size(), 1.0);
    const auto grad = oracle::dense_gradient(h, pool.generators, t, pool.reference);
    const auto fd = oracle::fd_gradient(
        [&](std::span<const double> point) {
            return oracle::dense_energy(h, pool.generators, point, pool.reference);
        },
        t, 1e-5);
    for (std::size_t k = 0; k < grad.size(); ++k)
        CHECK(grad[k] == doctest::Approx(fd[k]).epsilon(1e-7).scale(1.0));
}

TEST_CASE("dense_ground: diagonal case and variational floor") {
    const std::uint32_t n = 3;
    const QubitOperator h = QubitOperator::from_terms(
        n, {{PauliWord::single('Z', 0, n), 1.0}, {PauliWord::parse("Z1 Z2", n), -2.0}});
    // diagonal H: ground energy is the smallest diagonal entry
    const Eigen::MatrixXcd m = oracle::dense_matrix(h);
    double smallest = m(0, 0).real();
    for (Eigen::Index i = 1; i < m.rows(); ++i)
        smallest = std::min(smallest, m(i, i).real());
    const auto ground = oracle::dense_ground(h);
    CHECK(ground.energy == doctest::Approx(smallest).epsilon(1e-14));

    Rng rng(103);
    const auto [hr, pool] = qcc::testing::random_instance(rng, n, 12, 2, BasisState(n));
    const auto g2 = oracle::dense_ground(hr);
    const auto t = qcc::testing::random_amplitudes(rng, pool.size(), 1.0);
    CHECK(oracle::dense_energy(hr, pool.generators, t, pool.reference) >=
          g2.energy - 1e-12);
}

TEST_CASE("qubit caps guard the dense paths") {
    const QubitOperator h =
        QubitOperator::from_terms(20, {{PauliWord::single('Z', 0, 20), 1.0}});
    CHECK_THROWS_AS(oracle::dense_ground(h), CapacityError);
    CHECK_THROWS_AS(oracle::dense_matrix(PauliWord::identity(20)), CapacityError);
}
