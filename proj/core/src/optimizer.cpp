#include "qcc/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>

#include "qcc/errors.hpp"

namespace qcc {

namespace {

double inf_norm(std::span<const double> v) {
    double m = 0.0;
    for (double x : v)
        m = std::max(m, std::fabs(x));
    return m;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

struct CurvaturePair {
    std::vector<double> s, y;
    double rho;
};

}  // namespace

void wrap_amplitudes(std::span<double> t) {
    constexpr double pi = std::numbers::pi;
    for (double& x : t) {
        x = std::remainder(x, 2 * pi);  // lands in [-pi, pi]
        if (x == -pi)
            x = pi;
    }
}

MinimizeResult minimize(const EnergyGradient& objective, std::vector<double> t0,
                        const MinimizeOptions& opts) {
    const std::size_t dim = t0.size();
    const std::size_t max_evals = opts.max_evals ? opts.max_evals : 10 * dim + 200;
    constexpr double c1 = 1e-4, c2 = 0.9;

    std::size_t evals = 0;
    std::vector<double> best_t = t0;
    double best_e = std::numeric_limits<double>::infinity();

    std::vector<double> t = std::move(t0);
    std::vector<double> grad(dim), t_probe(dim), grad_probe(dim), direction(dim);

    auto eval = [&](std::span<const double> at, std::span<double> g) {
        const double e = objective(at, g);
        ++evals;
        if (!std::isfinite(e))
            throw NumericalError("objective returned a non-finite energy at evaluation " +
                                 std::to_string(evals));
        for (double gi : g)
            if (!std::isfinite(gi))
                throw NumericalError("objective returned a non-finite gradient at evaluation " +
                                     std::to_string(evals));
        if (e < best_e) {
            best_e = e;
            best_t.assign(at.begin(), at.end());
        }
        if (opts.progress)
            opts.progress(evals, e, inf_norm(g));
        return e;
    };

    auto finish = [&](bool converged) {
        MinimizeResult r;
        r.t_opt = best_t;
        wrap_amplitudes(r.t_opt);
        r.e_opt = best_e;
        r.evals = evals;
        r.converged = converged;
        return r;
    };

    double energy = eval(t, grad);
    if (dim == 0 || inf_norm(grad) < opts.grad_tol)
        return finish(true);

    std::deque<CurvaturePair> history;

    while (evals < max_evals) {
        // Two-loop recursion.
        direction.assign(grad.begin(), grad.end());
        std::vector<double> alpha(history.size());
        for (std::size_t i = history.size(); i-- > 0;) {
            const CurvaturePair& p = history[i];
            alpha[i] = p.rho * dot(p.s, direction);
            for (std::size_t j = 0; j < dim; ++j)
                direction[j] -= alpha[i] * p.y[j];
        }
        if (!history.empty()) {
            const CurvaturePair& last = history.back();
            const double gamma = dot(last.s, last.y) / dot(last.y, last.y);
            for (double& d : direction)
                d *= gamma;
        }
        for (std::size_t i = 0; i < history.size(); ++i) {
            const CurvaturePair& p = history[i];
            const double beta = p.rho * dot(p.y, direction);
            for (std::size_t j = 0; j < dim; ++j)
                direction[j] += (alpha[i] - beta) * p.s[j];
        }
        for (double& d : direction)
            d = -d;

        double dphi0 = dot(direction, grad);
        if (dphi0 >= 0.0) {
            history.clear();
            for (std::size_t j = 0; j < dim; ++j)
                direction[j] = -grad[j];
            dphi0 = dot(direction, grad);
        }
        const double phi0 = energy;
        const double dir_norm = inf_norm(direction);

        // phi(a) = f(t + a*direction); probes leave state in t/grad_probe.
        auto probe = [&](double a, double& phi, double& dphi) {
            for (std::size_t j = 0; j < dim; ++j)
                t_probe[j] = t[j] + a * direction[j];
            phi = eval(t_probe, grad_probe);
            dphi = dot(direction, grad_probe);
        };

        // Strong Wolfe search: bracketing walk, then bisection zoom.
        double accepted = -1.0, phi_acc = 0.0;
        bool state_fresh = false;  // t_probe/grad_probe hold the accepted point

        auto zoom = [&](double lo, double phi_lo, double dphi_lo, double hi, double phi_hi) {
            (void)phi_hi;
            for (std::size_t z = 0; z < 50 && evals < max_evals; ++z) {
                if (std::fabs(hi - lo) * dir_norm < opts.step_tol) {
                    accepted = lo;
                    phi_acc = phi_lo;
                    state_fresh = false;
                    return;
                }
                const double a = 0.5 * (lo + hi);
                double phi, dphi;
                probe(a, phi, dphi);
                if (phi > phi0 + c1 * a * dphi0 || phi >= phi_lo) {
                    hi = a;
                } else {
                    if (std::fabs(dphi) <= -c2 * dphi0) {
                        accepted = a;
                        phi_acc = phi;
                        state_fresh = true;
                        return;
                    }
                    if (dphi * (hi - lo) >= 0.0)
                        hi = lo;
                    lo = a;
                    phi_lo = phi;
                    dphi_lo = dphi;
                }
            }
            (void)dphi_lo;
            accepted = lo;
            phi_acc = phi_lo;
            state_fresh = false;
        };

        double a_prev = 0.0, phi_prev = phi0, dphi_prev = dphi0;
        double a = history.empty() ? std::min(1.0, 1.0 / std::max(dir_norm, 1e-12)) : 1.0;
        for (std::size_t ls = 0; ls < 40 && evals < max_evals; ++ls) {
            double phi, dphi;
            probe(a, phi, dphi);
            if (phi > phi0 + c1 * a * dphi0 || (ls > 0 && phi >= phi_prev)) {
                zoom(a_prev, phi_prev, dphi_prev, a, phi);
                break;
            }
            if (std::fabs(dphi) <= -c2 * dphi0) {
                accepted = a;
                phi_acc = phi;
                state_fresh = true;
                break;
            }
            if (dphi >= 0.0) {
                zoom(a, phi, dphi, a_prev, phi_prev);
                break;
            }
            a_prev = a;
            phi_prev = phi;
            dphi_prev = dphi;
            a = std::min(2.0 * a, 1e8);
        }

        if (accepted < 0.0)
            return finish(false);  // line search exhausted without a Wolfe point
        if (accepted == 0.0)
            return finish(true);   // interval collapsed onto the current point

        if (!state_fresh) {
            double dphi_unused;
            probe(accepted, phi_acc, dphi_unused);
        }

        CurvaturePair pair;
        pair.s.resize(dim);
        pair.y.resize(dim);
        double step_norm = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
            pair.s[j] = t_probe[j] - t[j];
            pair.y[j] = grad_probe[j] - grad[j];
            step_norm = std::max(step_norm, std::fabs(pair.s[j]));
        }
        const double sy = dot(pair.s, pair.y);
        if (sy > 1e-16) {
            pair.rho = 1.0 / sy;
            history.push_back(std::move(pair));
            if (history.size() > opts.history)
                history.pop_front();
        }

        t.swap(t_probe);
        grad.swap(grad_probe);
        energy = phi_acc;

        if (inf_norm(grad) < opts.grad_tol || step_norm < opts.step_tol)
            return finish(true);
    }

    return finish(false);
}

}  // namespace qcc
