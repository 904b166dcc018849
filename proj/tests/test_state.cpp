#include "qcc/sparse_state.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "qcc/errors.hpp"
#include "qcc/oracle.hpp"
#include "test_support.hpp"

using namespace qcc;
using qcc::testing::Rng;

TEST_CASE("reference states") {
    const SparseState a = SparseState::reference(4, 0);
    CHECK(a.size() == 1);
    CHECK(a.coeff(0) == 1.0);
    CHECK(a.basis_state(0).to_string() == "0000");
    CHECK(a.norm() == 1.0);

    const SparseState b = SparseState::reference(4, BasisState::parse("0011"));
    CHECK(b.basis_state(0).to_string() == "0011");
    CHECK(b.norm() == 1.0);
}

TEST_CASE("apply_generator_exponential: fixed cases") {
    const SparseState s = SparseState::reference(2, 0);
    const PauliWord y0 = PauliWord::single('Y', 0, 2);

    CHECK(apply_generator_exponential(s, y0, 0.0).size() == 1);

    const double t = 0.83;
    const SparseState r = apply_generator_exponential(s, y0, t);
    REQUIRE(r.size() == 2);
    CHECK(r.basis_state(0).to_string() == "00");
    CHECK(r.coeff(0) == doctest::Approx(std::cos(t / 2)).epsilon(1e-15));
    CHECK(r.basis_state(1).to_string() == "01");
    CHECK(r.coeff(1) == doctest::Approx(std::sin(t / 2)).epsilon(1e-15));

    // dense 4-vector evolution oracle
    const Eigen::VectorXcd dense =
        oracle::dense_state(std::vector<PauliWord>{y0}, std::vector<double>{t}, BasisState(2));
    CHECK(dense[0].real() == doctest::Approx(r.coeff(0)).epsilon(1e-15));
    CHECK(dense[1].real() == doctest::Approx(r.coeff(1)).epsilon(1e-15));
}

TEST_CASE("apply rejects non-imaginary generators") {
    const SparseState s = SparseState::reference(2, 0);
    CHECK_THROWS_AS(apply_generator_exponential(s, PauliWord::parse("X0 X1", 2), 0.3),
                    ContractError);
}

TEST_CASE("forward then backward application returns the state") {
    Rng rng(31);
    const std::uint32_t n = 7;
    SparseState s = SparseState::reference(n, 5);
    for (int i = 0; i < 4; ++i)
        s = apply_generator_exponential(s, qcc::testing::random_generator(rng, n),
                                        qcc::testing::uniform(rng, -1.0, 1.0));

    const PauliWord t = qcc::testing::random_generator(rng, n);
    const double a = 0.9177;
    const SparseState back =
        apply_generator_exponential(apply_generator_exponential(s, t, a), t, -a);
    REQUIRE(back.size() == s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(bits::equal(back.key(i), s.key(i)));
        CHECK(back.coeff(i) == doctest::Approx(s.coeff(i)).epsilon(1e-14));
    }
}

TEST_CASE("unlimited-cap application reproduces the dense statevector") {
    Rng rng(32);
    for (int trial = 0; trial < 3; ++trial) {
        const std::uint32_t n = 10;
        const std::size_t m = 12;
        std::vector<PauliWord> gens;
        std::vector<double> t;
        for (std::size_t k = 0; k < m; ++k) {
            gens.push_back(qcc::testing::random_generator(rng, n));
            t.push_back(qcc::testing::uniform(rng, -1.2, 1.2));
        }
        const BasisState ref(n, qcc::testing::uniform_bits(rng, n));

        SparseState s = SparseState::reference(n, ref);
        for (std::size_t k = m; k-- > 0;)
            s = apply_generator_exponential(s, gens[k], t[k]);

        const Eigen::VectorXcd dense = oracle::dense_state(gens, t, ref);
        CHECK(dense.imag().cwiseAbs().maxCoeff() < 1e-14);
        for (std::size_t i = 0; i < s.size(); ++i)
            CHECK(dense[static_cast<Eigen::Index>(s.key(i)[0])].real() ==
                  doctest::Approx(s.coeff(i)).epsilon(1e-12));
        // entries not in the sparse state must vanish
        double off = 0.0;
        for (Eigen::Index w = 0; w < dense.size(); ++w) {
            if (!s.find(std::vector<Limb>{static_cast<Limb>(w)}))
                off = std::max(off, std::abs(dense[w]));
        }
        CHECK(off < 1e-12);
    }
}

TEST_CASE("expansion dimension is bounded by 2^k and 2^n") {
    Rng rng(33);
    const std::uint32_t n = 5;
    SparseState s = SparseState::reference(n, 0);
    for (std::size_t k = 1; k <= 10; ++k) {
        s = apply_generator_exponential(s, qcc::testing::random_generator(rng, n),
                                        qcc::testing::uniform(rng, -1.0, 1.0));
        CHECK(s.size() <= (std::size_t{1} << std::min<std::size_t>(k, n)));
    }
}

TEST_CASE("truncate: fixed cases") {
    const std::uint32_t n = 2;
    SparseState s = SparseState::reference(n, 0);
    const SparseState untouched = truncate(s, 5);
    CHECK(untouched.size() == 1);
    CHECK(untouched.norm_loss_log().empty());

    // {|00>: 0.8, |01>: 0.6} built from one rotation: cos(t/2) = 0.8.
    const double t = 2 * std::acos(0.8);
    s = apply_generator_exponential(s, PauliWord::single('Y', 0, n), t);
    REQUIRE(s.size() == 2);
    const SparseState cut = truncate(s, 1);
    REQUIRE(cut.size() == 1);
    CHECK(cut.basis_state(0).to_string() == "00");
    CHECK(cut.coeff(0) == doctest::Approx(1.0).epsilon(1e-15));
    REQUIRE(cut.norm_loss_log().size() == 1);
    CHECK(cut.norm_loss_log()[0] == doctest::Approx(0.8).epsilon(1e-15));

    CHECK_THROWS_AS(truncate(s, 0), ContractError);
}

TEST_CASE("truncate keeps the top block by magnitude and renormalizes") {
    Rng rng(34);
    const std::uint32_t n = 12;
    SparseState s = SparseState::reference(n, 0);
    while (s.size() < 1000)
        s = apply_generator_exponential(s, qcc::testing::random_generator(rng, n),
                                        qcc::testing::uniform(rng, -1.4, 1.4));

    const SparseState cut = truncate(s, 100);
    CHECK(cut.size() == 100);
    CHECK(cut.norm() == doctest::Approx(1.0).epsilon(1e-12));

    // full-sort oracle for the kept set
    std::vector<std::size_t> idx(s.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (std::fabs(s.coeff(a)) != std::fabs(s.coeff(b)))
            return std::fabs(s.coeff(a)) > std::fabs(s.coeff(b));
        return bits::compare(s.key(a), s.key(b)) < 0;
    });
    idx.resize(100);
    std::sort(idx.begin(), idx.end());
    for (std::size_t i = 0; i < 100; ++i)
        CHECK(bits::equal(cut.key(i), s.key(idx[i])));
}

TEST_CASE("truncation inside apply fires only above the cap") {
    Rng rng(35);
    const std::uint32_t n = 6;
    SparseState s = SparseState::reference(n, 0);
    for (int i = 0; i < 8; ++i)
        s = apply_generator_exponential(s, qcc::testing::random_generator(rng, n),
                                        qcc::testing::uniform(rng, -1.0, 1.0), 10);
    CHECK(s.size() <= 10);
    CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-12));
    for (double lambda : s.norm_loss_log()) {
        CHECK(lambda <= 1.0);
        CHECK(lambda > 0.0);
    }
}

TEST_CASE("state dump format") {
    SparseState s = SparseState::reference(3, 0);
    s = apply_generator_exponential(s, PauliWord::single('Y', 1, 3), 1.0);
    std::ostringstream out;
    s.dump(out);
    std::istringstream lines(out.str());
    std::string bits_text;
    double coeff;
    REQUIRE((lines >> bits_text >> coeff));
    CHECK(bits_text == "000");
    CHECK(coeff == doctest::Approx(std::cos(0.5)).epsilon(1e-15));
    REQUIRE((lines >> bits_text >> coeff));
    CHECK(bits_text == "010");
}

TEST_CASE("states wider than 64 qubits") {
    const std::uint32_t n = 80;
    SparseState s = SparseState::reference(n, BasisState(n));
    const PauliWord t = PauliWord::parse("Y70 X3", n);
    s = apply_generator_exponential(s, t, 0.6);
    REQUIRE(s.size() == 2);
    CHECK(s.basis_state(1).bit(70));
    CHECK(s.basis_state(1).bit(3));
    CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-15));
}
