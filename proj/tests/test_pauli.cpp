#include "qcc/pauli.hpp"

#include <complex>

#include "doctest.h"
#include "qcc/errors.hpp"
#include "qcc/oracle.hpp"
#include "test_support.hpp"

using namespace qcc;
using qcc::testing::Rng;

namespace {

double matrix_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("multiply: identity and involution") {
    const PauliWord x0 = PauliWord::single('X', 0, 3);
    const PauliWord id = PauliWord::identity(3);
    CHECK(multiply(x0, id) == x0);
    CHECK(multiply(id, x0) == x0);

    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        const PauliWord w = qcc::testing::random_word(rng, 8);
        const PauliWord sq = multiply(w, w);
        CHECK(sq.is_identity());
        CHECK(sq.phase_power() == 0);
    }
}

TEST_CASE("multiply: x0 * y0 = i z0, against the dense oracle") {
    const PauliWord x0 = PauliWord::single('X', 0, 1);
    const PauliWord y0 = PauliWord::single('Y', 0, 1);
    const PauliWord p = multiply(x0, y0);
    CHECK(p.phase() == std::complex<double>(0.0, 1.0));
    CHECK(bits::is_zero(p.x_mask()));
    CHECK(bits::get(p.z_mask(), 0));
    CHECK(matrix_distance(oracle::dense_matrix(p),
                          oracle::dense_matrix(x0) * oracle::dense_matrix(y0)) == 0.0);
}

TEST_CASE("multiply: random products match dense matrix multiplication") {
    Rng rng(12);
    for (int i = 0; i < 50; ++i) {
        const PauliWord a = qcc::testing::random_word(rng, 5);
        const PauliWord b = qcc::testing::random_word(rng, 5);
        CHECK(matrix_distance(oracle::dense_matrix(multiply(a, b)),
                              oracle::dense_matrix(a) * oracle::dense_matrix(b)) < 1e-15);
    }
}

TEST_CASE("multiply: mismatched qubit counts") {
    CHECK_THROWS_AS(multiply(PauliWord::identity(2), PauliWord::identity(3)), DimensionError);
}

TEST_CASE("multiply is associative, phases exact") {
    Rng rng(13);
    for (int i = 0; i < 500; ++i) {
        const PauliWord a = qcc::testing::random_word(rng, 12);
        const PauliWord b = qcc::testing::random_word(rng, 12);
        const PauliWord c = qcc::testing::random_word(rng, 12);
        CHECK(multiply(multiply(a, b), c) == multiply(a, multiply(b, c)));
    }
}

TEST_CASE("xz_factorize: fixed cases") {
    const auto fz = xz_factorize(PauliWord::single('Z', 3, 4));
    CHECK(fz.phase() == std::complex<double>(1.0, 0.0));
    CHECK(fz.x_word.is_identity());
    CHECK(fz.z_word == PauliWord::single('Z', 3, 4));

    const auto fy = xz_factorize(PauliWord::single('Y', 0, 1));
    CHECK(fy.phase() == std::complex<double>(0.0, 1.0));
    CHECK(fy.x_word == PauliWord::single('X', 0, 1));
    CHECK(fy.z_word == PauliWord::single('Z', 0, 1));
}

TEST_CASE("xz_factorize: x0 y1 z2 against the dense oracle") {
    const PauliWord w = PauliWord::parse("X0 Y1 Z2", 3);
    const auto f = xz_factorize(w);
    CHECK(f.phase() == std::complex<double>(0.0, 1.0));
    CHECK(f.x_word == PauliWord::parse("X0 X1", 3));
    CHECK(f.z_word == PauliWord::parse("Z1 Z2", 3));
    CHECK(matrix_distance(oracle::dense_matrix(w),
                          f.phase() * oracle::dense_matrix(f.x_word) *
                              oracle::dense_matrix(f.z_word)) == 0.0);
}

TEST_CASE("xz_factorize then reassemble is the identity map") {
    Rng rng(14);
    for (int i = 0; i < 10000; ++i) {
        const PauliWord w = qcc::testing::random_word(rng, 17);
        const auto f = xz_factorize(w);
        PauliWord back = multiply(f.x_word, f.z_word);
        back = PauliWord(back.n_qubits(), {back.x_mask().begin(), back.x_mask().end()},
                         {back.z_mask().begin(), back.z_mask().end()},
                         back.phase_power() + f.phase_power);
        CHECK(back == w);
    }
}

TEST_CASE("commutes: fixed cases") {
    CHECK(commutes(PauliWord::single('Z', 0, 2), PauliWord::single('Z', 1, 2)));
    CHECK_FALSE(commutes(PauliWord::single('X', 0, 1), PauliWord::single('Z', 0, 1)));
}

TEST_CASE("commutes agrees with the dense commutator") {
    Rng rng(15);
    SUBCASE("dense matrices at 5 qubits") {
        for (int i = 0; i < 40; ++i) {
            const PauliWord a = qcc::testing::random_word(rng, 5);
            const PauliWord b = qcc::testing::random_word(rng, 5);
            const Eigen::MatrixXcd da = oracle::dense_matrix(a);
            const Eigen::MatrixXcd db = oracle::dense_matrix(b);
            const double comm = matrix_distance(da * db, db * da);
            CHECK(commutes(a, b) == (comm == 0.0));
        }
    }
    SUBCASE("matrix action at 10 qubits") {
        for (int i = 0; i < 10; ++i) {
            const PauliWord a = qcc::testing::random_word(rng, 10);
            const PauliWord b = qcc::testing::random_word(rng, 10);
            const Eigen::MatrixXcd da = oracle::dense_matrix(a);
            const Eigen::MatrixXcd db = oracle::dense_matrix(b);
            Eigen::VectorXcd v = Eigen::VectorXcd::Zero(1 << 10);
            for (int k = 0; k < v.size(); ++k)
                v[k] = {qcc::testing::uniform(rng, -1, 1), qcc::testing::uniform(rng, -1, 1)};
            const double comm = ((da * (db * v)) - (db * (da * v))).cwiseAbs().maxCoeff();
            CHECK(commutes(a, b) == (comm == 0.0));
        }
    }
}

TEST_CASE("is_imaginary_generator") {
    CHECK(is_imaginary_generator(PauliWord::single('Y', 0, 1)));
    CHECK_FALSE(is_imaginary_generator(PauliWord::parse("X0 Z1", 2)));

    const PauliWord yyy = PauliWord::parse("Y0 Y1 Y2", 3);
    CHECK(is_imaginary_generator(yyy));
    // -i * (y0 y1 y2) must have purely real entries.
    const Eigen::MatrixXcd m = std::complex<double>(0, -1) * oracle::dense_matrix(yyy);
    CHECK(m.imag().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("hermiticity matches the dense conjugate transpose") {
    Rng rng(16);
    for (int i = 0; i < 60; ++i) {
        std::uint64_t x = qcc::testing::uniform_bits(rng, 6);
        std::uint64_t z = qcc::testing::uniform_bits(rng, 6);
        const int p = static_cast<int>(rng() & 3);
        const PauliWord w(6, {x}, {z}, p);
        const Eigen::MatrixXcd m = oracle::dense_matrix(w);
        const bool dense_hermitian = matrix_distance(m, m.adjoint()) == 0.0;
        CHECK(w.is_hermitian() == dense_hermitian);
    }
}

TEST_CASE("parse and to_string") {
    CHECK(PauliWord::parse("X0 Y3 Z7").to_string() == "X0 Y3 Z7");
    CHECK(PauliWord::parse("I").to_string() == "I");
    CHECK(PauliWord::parse("").is_identity());
    CHECK(PauliWord::parse("  Z2   X0 ").to_string() == "X0 Z2");
    CHECK(PauliWord::parse("Y1", 4).n_qubits() == 4);
    CHECK(PauliWord::parse("Y1").n_qubits() == 2);
    CHECK_THROWS_AS(PauliWord::parse("Q0"), ParseError);
    CHECK_THROWS_AS(PauliWord::parse("X"), ParseError);
    CHECK_THROWS_AS(PauliWord::parse("X0 Z0"), ParseError);
    CHECK_THROWS_AS(PauliWord::parse("X9", 4), ParseError);
}

TEST_CASE("masks support more than 64 qubits") {
    const PauliWord w = PauliWord::parse("X3 Y77 Z120", 128);
    CHECK(w.n_qubits() == 128);
    CHECK(w.to_string() == "X3 Y77 Z120");
    CHECK(is_imaginary_generator(w));
    const PauliWord sq = multiply(w, w);
    CHECK(sq.is_identity());
    const auto f = xz_factorize(w);
    CHECK(f.phase() == std::complex<double>(0.0, 1.0));
}
