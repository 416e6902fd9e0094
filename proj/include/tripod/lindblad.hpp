// Master-equation right-hand side and its time integration. `integrate` is
// the production adaptive propagator; `reference_propagate` is a fixed-step
// RK4 built on an independent element-by-element transcription of the
// equations of motion, used as a numerical cross-check.
#pragma once

#include "tripod/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace tripod::lindblad {

using model::Complex;
using model::DensityMatrix;
using model::Matrix4c;

struct IntegratorConfig {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double t_start = -5.0;
    double t_end = 5.0;
    double max_step = 0.0;  // 0 = unlimited
    int sample_count = 201;

    void validate() const {
        if (!(t_start < t_end)) throw std::invalid_argument("t_start must be < t_end");
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
            throw std::invalid_argument("tolerances must be positive");
        if (sample_count < 2) throw std::invalid_argument("sample_count must be >= 2");
    }
};

// Sampled solution of the master equation with per-sample sanity diagnostics.
struct Trajectory {
    std::vector<double> times;
    std::vector<DensityMatrix> states;
    std::vector<double> trace_errors;
    std::vector<double> min_eigenvalues;
    std::vector<double> excited_populations;

    const DensityMatrix& final_state() const { return states.back(); }
};

struct IntegrationError : std::runtime_error {
    double tau;
    explicit IntegrationError(double t)
        : std::runtime_error("integration step size underflow at tau = " + std::to_string(t)),
          tau(t) {}
};

// d(rho)/d(tau) = -i [H'(tau), rho] + R(rho): commutator form of the
// equations of motion plus the relaxation term.
inline Matrix4c rhs(double tau, const Matrix4c& rho, const model::PulseSet& p,
                    const model::RelaxationRates& r) {
    const Matrix4c h = model::bare_hamiltonian(tau, p);
    return Complex(0.0, -1.0) * (h * rho - rho * h) + model::relaxation_term(rho, r);
}

namespace detail {

// Hand-coded component equations (the index typos of the printed set are
// corrected: population equations couple Omega_k to rho_0k). Kept separate
// from `rhs` so the two routes stay independent.
inline Matrix4c master_rhs_elementwise(double tau, const Matrix4c& rho,
                                       const model::PulseSet& p,
                                       const model::RelaxationRates& r) {
    const Complex i(0.0, 1.0);
    const Complex o1 = model::rabi(1, tau, p);
    const Complex o2 = model::rabi(2, tau, p);
    const Complex o3 = model::rabi(3, tau, p);
    const double gamma = r.total_decay();
    const double d13 = p.raman_detuning;

    const Complex r00 = rho(0, 0), r11 = rho(1, 1), r22 = rho(2, 2), r33 = rho(3, 3);
    const Complex r01 = rho(0, 1), r02 = rho(0, 2), r03 = rho(0, 3);
    const Complex r12 = rho(1, 2), r13 = rho(1, 3), r23 = rho(2, 3);

    Matrix4c d = Matrix4c::Zero();
    d(0, 0) = -i * (o1 * std::conj(r01) - std::conj(o1) * r01 + o2 * std::conj(r02) -
                    std::conj(o2) * r02 + o3 * std::conj(r03) - std::conj(o3) * r03) -
              gamma * r00;
    d(1, 1) = i * (o1 * std::conj(r01) - std::conj(o1) * r01) + r.gamma_sp_1 * r00;
    d(2, 2) = i * (o2 * std::conj(r02) - std::conj(o2) * r02) + r.gamma_sp_2 * r00;
    d(3, 3) = i * (o3 * std::conj(r03) - std::conj(o3) * r03) + r.gamma_sp_3 * r00;
    d(0, 1) = -i * (o2 * std::conj(r12) + o3 * std::conj(r13) + o1 * (r11 - r00) +
                    p.delta * r01) -
              (0.5 * gamma + r.deph_01) * r01;
    d(0, 2) = -i * (o1 * r12 + o3 * std::conj(r23) + o2 * (r22 - r00) + p.delta * r02) -
              (0.5 * gamma + r.deph_02) * r02;
    d(0, 3) = -i * (o1 * r13 + o2 * r23 + o3 * (r33 - r00) + p.delta3() * r03) -
              (0.5 * gamma + r.deph_03) * r03;
    d(1, 2) = i * (o2 * std::conj(r01) - std::conj(o1) * r02) - r.deph_12 * r12;
    d(1, 3) = i * (o3 * std::conj(r01) - std::conj(o1) * r03 + d13 * r13) - r.deph_13 * r13;
    d(2, 3) = i * (o3 * std::conj(r02) - std::conj(o2) * r03 + d13 * r23) - r.deph_23 * r23;
    d(1, 0) = std::conj(d(0, 1));
    d(2, 0) = std::conj(d(0, 2));
    d(3, 0) = std::conj(d(0, 3));
    d(2, 1) = std::conj(d(1, 2));
    d(3, 1) = std::conj(d(1, 3));
    d(3, 2) = std::conj(d(2, 3));
    return d;
}

}  // namespace detail

// Adaptive Dormand-Prince 5(4) integration with embedded error control.
// Stored samples are re-Hermitized as (rho + rho^dagger)/2; the raw state is
// propagated untouched between samples.
inline Trajectory integrate(const DensityMatrix& rho0, const model::PulseSet& p,
                            const model::RelaxationRates& r, const IntegratorConfig& cfg) {
    cfg.validate();
    r.validate();

    // Dormand-Prince coefficients.
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    // b - b_hat, the embedded 4th-order error weights.
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    const double span = cfg.t_end - cfg.t_start;
    const double hmax = cfg.max_step > 0.0 ? cfg.max_step : span;

    Trajectory traj;
    traj.times.reserve(static_cast<std::size_t>(cfg.sample_count));
    traj.states.reserve(static_cast<std::size_t>(cfg.sample_count));

    auto store = [&](double t, const Matrix4c& y) {
        const DensityMatrix sym = 0.5 * (y + y.adjoint().eval());
        traj.times.push_back(t);
        traj.states.push_back(sym);
        traj.trace_errors.push_back(model::trace_error(sym));
        traj.min_eigenvalues.push_back(model::min_eigenvalue(sym));
        traj.excited_populations.push_back(sym(0, 0).real());
    };

    Matrix4c y = rho0;
    double t = cfg.t_start;
    store(t, y);

    Matrix4c k1 = rhs(t, y, p, r);  // FSAL
    double h = std::min(hmax, span / 100.0);

    for (int s = 1; s < cfg.sample_count; ++s) {
        const double t_sample =
            cfg.t_start + span * static_cast<double>(s) / (cfg.sample_count - 1);
        while (t < t_sample) {
            h = std::min({h, hmax, t_sample - t});
            if (h < 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t)))
                throw IntegrationError(t);

            const Matrix4c k2 = rhs(t + c2 * h, (y + h * (a21 * k1)).eval(), p, r);
            const Matrix4c k3 = rhs(t + c3 * h, (y + h * (a31 * k1 + a32 * k2)).eval(), p, r);
            const Matrix4c k4 =
                rhs(t + c4 * h, (y + h * (a41 * k1 + a42 * k2 + a43 * k3)).eval(), p, r);
            const Matrix4c k5 = rhs(
                t + c5 * h, (y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)).eval(), p, r);
            const Matrix4c k6 = rhs(
                t + h, (y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)).eval(),
                p, r);
            const Matrix4c ynew =
                y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            const Matrix4c k7 = rhs(t + h, ynew, p, r);
            const Matrix4c err =
                h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

            // Uniform error weighting against the matrix scale: the state is a
            // density matrix of unit trace, so entries of vastly different
            // magnitude share one physically meaningful scale.
            const double scale =
                cfg.abs_tol +
                cfg.rel_tol * std::max({y.cwiseAbs().maxCoeff(), ynew.cwiseAbs().maxCoeff(), 1.0});
            const double errnorm = err.cwiseAbs().maxCoeff() / scale;

            if (errnorm <= 1.0) {
                t += h;
                y = ynew;
                k1 = k7;
                const double grow = errnorm > 0.0 ? 0.9 * std::pow(errnorm, -0.2) : 5.0;
                h *= std::min(5.0, std::max(0.2, grow));
            } else {
                h *= std::max(0.2, 0.9 * std::pow(errnorm, -0.2));
            }
        }
        store(t_sample, y);
    }
    return traj;
}

// Fixed-step classical RK4 over `span`, driven by the element-wise equations.
// Converges to the `integrate` result as steps grows; serves as the
// independent oracle.
inline DensityMatrix reference_propagate(const DensityMatrix& rho0, const model::PulseSet& p,
                                         const model::RelaxationRates& r, long steps,
                                         std::pair<double, double> span) {
    if (steps < 1) throw std::invalid_argument("reference_propagate: steps must be >= 1");
    if (span.first == span.second) return rho0;
    const double h = (span.second - span.first) / static_cast<double>(steps);
    Matrix4c y = rho0;
    double t = span.first;
    for (long n = 0; n < steps; ++n) {
        const Matrix4c k1 = detail::master_rhs_elementwise(t, y, p, r);
        const Matrix4c k2 =
            detail::master_rhs_elementwise(t + 0.5 * h, (y + 0.5 * h * k1).eval(), p, r);
        const Matrix4c k3 =
            detail::master_rhs_elementwise(t + 0.5 * h, (y + 0.5 * h * k2).eval(), p, r);
        const Matrix4c k4 = detail::master_rhs_elementwise(t + h, (y + h * k3).eval(), p, r);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t = span.first + (span.second - span.first) * static_cast<double>(n + 1) /
                             static_cast<double>(steps);
    }
    return 0.5 * (y + y.adjoint().eval());
}

}  // namespace tripod::lindblad
