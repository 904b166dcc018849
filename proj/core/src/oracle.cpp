#include "qcc/oracle.hpp"

#include <bit>
#include <complex>

#include "qcc/errors.hpp"

namespace qcc::oracle {

namespace {

using cd = std::complex<double>;

cd quarter_phase(int power) {
    switch (power & 3) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

std::uint64_t low_limb(std::span<const Limb> v) {
    return v.empty() ? 0 : v[0];
}

void check_cap(std::uint32_t n, std::uint32_t cap, const char* what) {
    if (n > cap)
        throw CapacityError(std::string(what) + ": " + std::to_string(n) +
                            " qubits exceed the dense cap of " + std::to_string(cap));
}

int parity_sign(std::uint64_t v) {
    return (std::popcount(v) & 1) ? -1 : 1;
}

// y[w ^ x] += phase * (-1)^{parity(z & w)} * v[w] for every w.
void accumulate_word_action(const Eigen::VectorXcd& v, std::uint64_t x, std::uint64_t z,
                            cd phase, Eigen::VectorXcd& y) {
    const auto dim = v.size();
    for (Eigen::Index w = 0; w < dim; ++w) {
        const auto uw = static_cast<std::uint64_t>(w);
        y[static_cast<Eigen::Index>(uw ^ x)] +=
            phase * static_cast<double>(parity_sign(z & uw)) * v[w];
    }
}

Eigen::VectorXcd operator_times(const QubitOperator& op, const Eigen::VectorXcd& v) {
    Eigen::VectorXcd y = Eigen::VectorXcd::Zero(v.size());
    for (std::size_t t = 0; t < op.size(); ++t) {
        const std::uint64_t x = low_limb(op.term_x(t));
        const std::uint64_t z = low_limb(op.term_z(t));
        const cd phase = quarter_phase(static_cast<int>(bits::popcount_and(op.term_x(t),
                                                                           op.term_z(t))));
        accumulate_word_action(v, x, z, phase * op.coefficient(t), y);
    }
    return y;
}

// One ansatz factor: v <- cos(t/2) v - i sin(t/2) T v.
void apply_factor(Eigen::VectorXcd& v, const PauliWord& t_word, double amplitude) {
    const std::uint64_t x = low_limb(t_word.x_mask());
    const std::uint64_t z = low_limb(t_word.z_mask());
    const cd phase = quarter_phase(t_word.phase_power());
    Eigen::VectorXcd y = std::cos(amplitude / 2) * v;
    accumulate_word_action(v, x, z, cd(0.0, -1.0) * std::sin(amplitude / 2) * phase, y);
    v = std::move(y);
}

// The derivative of one factor: v <- (-sin(t/2) v - i cos(t/2) T v) / 2.
void apply_factor_derivative(Eigen::VectorXcd& v, const PauliWord& t_word, double amplitude) {
    const std::uint64_t x = low_limb(t_word.x_mask());
    const std::uint64_t z = low_limb(t_word.z_mask());
    const cd phase = quarter_phase(t_word.phase_power());
    Eigen::VectorXcd y = -0.5 * std::sin(amplitude / 2) * v;
    accumulate_word_action(v, x, z, cd(0.0, -0.5) * std::cos(amplitude / 2) * phase, y);
    v = std::move(y);
}

}  // namespace

Eigen::MatrixXcd dense_matrix(const PauliWord& w, std::uint32_t n_cap) {
    check_cap(w.n_qubits(), n_cap, "dense_matrix");
    const Eigen::Index dim = Eigen::Index{1} << w.n_qubits();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    const std::uint64_t x = low_limb(w.x_mask());
    const std::uint64_t z = low_limb(w.z_mask());
    const cd phase = quarter_phase(w.phase_power());
    for (Eigen::Index col = 0; col < dim; ++col) {
        const auto uc = static_cast<std::uint64_t>(col);
        m(static_cast<Eigen::Index>(uc ^ x), col) =
            phase * static_cast<double>(parity_sign(z & uc));
    }
    return m;
}

Eigen::MatrixXcd dense_matrix(const QubitOperator& op, std::uint32_t n_cap) {
    check_cap(op.n_qubits(), n_cap, "dense_matrix");
    const Eigen::Index dim = Eigen::Index{1} << op.n_qubits();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::size_t t = 0; t < op.size(); ++t)
        m += op.coefficient(t) * dense_matrix(op.word(t), n_cap);
    return m;
}

Eigen::VectorXcd dense_state(std::span<const PauliWord> generators, std::span<const double> t,
                             const BasisState& reference, std::uint32_t n_cap) {
    check_cap(reference.n_qubits(), n_cap, "dense_state");
    if (generators.size() != t.size())
        throw ContractError("generator and amplitude counts differ");
    const Eigen::Index dim = Eigen::Index{1} << reference.n_qubits();
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
    v[static_cast<Eigen::Index>(low_limb(reference.limbs()))] = 1.0;
    for (std::size_t k = generators.size(); k-- > 0;)
        apply_factor(v, generators[k], t[k]);
    return v;
}

double dense_energy(const QubitOperator& h, std::span<const PauliWord> generators,
                    std::span<const double> t, const BasisState& reference,
                    std::uint32_t n_cap) {
    const Eigen::VectorXcd v = dense_state(generators, t, reference, n_cap);
    return v.dot(operator_times(h, v)).real();
}

std::vector<double> dense_gradient(const QubitOperator& h, std::span<const PauliWord> generators,
                                   std::span<const double> t, const BasisState& reference,
                                   std::uint32_t n_cap) {
    const std::size_t m = generators.size();
    const Eigen::VectorXcd v = dense_state(generators, t, reference, n_cap);
    const Eigen::VectorXcd hv = operator_times(h, v);
    std::vector<double> grad(m);
    const Eigen::Index dim = Eigen::Index{1} << reference.n_qubits();
    for (std::size_t k = 0; k < m; ++k) {
        Eigen::VectorXcd dv = Eigen::VectorXcd::Zero(dim);
        dv[static_cast<Eigen::Index>(low_limb(reference.limbs()))] = 1.0;
        for (std::size_t j = m; j-- > 0;) {
            if (j == k)
                apply_factor_derivative(dv, generators[j], t[j]);
            else
                apply_factor(dv, generators[j], t[j]);
        }
        grad[k] = 2.0 * dv.dot(hv).real();
    }
    return grad;
}

GroundState dense_ground(const QubitOperator& h, std::uint32_t n_cap) {
    check_cap(h.n_qubits(), n_cap, "dense_ground");
    const Eigen::MatrixXcd m = dense_matrix(h, n_cap);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
    if (solver.info() != Eigen::Success)
        throw NumericalError("dense eigensolver failed");
    return {solver.eigenvalues()(0), solver.eigenvectors().col(0)};
}

std::vector<double> fd_gradient(const std::function<double(std::span<const double>)>& f,
                                std::span<const double> t, double h_step) {
    std::vector<double> point(t.begin(), t.end());
    std::vector<double> grad(t.size());
    for (std::size_t k = 0; k < t.size(); ++k) {
        const double saved = point[k];
        point[k] = saved + h_step;
        const double above = f(point);
        point[k] = saved - h_step;
        const double below = f(point);
        point[k] = saved;
        grad[k] = (above - below) / (2 * h_step);
    }
    return grad;
}

}  // namespace qcc::oracle
