// Physical model of the tripod atom driven by three chirped Gaussian pulses:
// pulse parameters, Hamiltonians in the bare and dark-bright frames, the
// relaxation superoperator and initial states. All quantities are
// dimensionless, scaled by the pulse duration tau_p.
#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace tripod::model {

using Complex = std::complex<double>;
using Matrix4c = Eigen::Matrix4cd;
using Vector4c = Eigen::Vector4cd;

// 4x4 complex Hermitian, unit trace; index order 0 = excited, 1..3 = ground.
using DensityMatrix = Eigen::Matrix4cd;

// Peak Rabi amplitudes W_k*tau_p, chirp rate beta*tau_p^2 and detunings.
// delta is the common single-photon detuning of fields 1 and 2;
// raman_detuning is delta_13 = (Delta - delta_3)*tau_p, so the single-photon
// detuning of field 3 is delta3() = delta - raman_detuning.
struct PulseSet {
    Complex w1{0.0, 0.0};
    Complex w2{0.0, 0.0};
    Complex w3{0.0, 0.0};
    double beta = 0.0;
    double delta = 0.0;
    double raman_detuning = 0.0;

    double delta3() const { return delta - raman_detuning; }

    // |W1|^2 + |W2|^2, the squared norm of the Raman-resonant pair.
    double raman_pair_norm2() const { return std::norm(w1) + std::norm(w2); }
    double raman_pair_norm() const { return std::sqrt(raman_pair_norm2()); }
};

// Spontaneous-decay branches Gamma_0j*tau_p and dephasing rates gamma*tau_p.
struct RelaxationRates {
    double gamma_sp_1 = 0.0;
    double gamma_sp_2 = 0.0;
    double gamma_sp_3 = 0.0;
    double deph_01 = 0.0;
    double deph_02 = 0.0;
    double deph_03 = 0.0;
    double deph_12 = 0.0;
    double deph_13 = 0.0;
    double deph_23 = 0.0;

    // Total decay Gamma = Gamma_01 + Gamma_02 + Gamma_03.
    double total_decay() const { return gamma_sp_1 + gamma_sp_2 + gamma_sp_3; }

    void validate() const {
        for (double r : {gamma_sp_1, gamma_sp_2, gamma_sp_3, deph_01, deph_02,
                         deph_03, deph_12, deph_13, deph_23}) {
            if (r < 0.0) throw std::invalid_argument("relaxation rates must be nonnegative");
        }
    }
};

// Sign of the Raman detuning selects the transfer scenario and with it the
// initial state: positive starts in |1>, negative starts in |3>.
enum class SimCase { PositiveRaman, NegativeRaman };

inline void validate_case(SimCase c, const PulseSet& p) {
    if (c == SimCase::PositiveRaman && !(p.raman_detuning > 0.0))
        throw std::invalid_argument("PositiveRaman requires raman_detuning > 0");
    if (c == SimCase::NegativeRaman && !(p.raman_detuning < 0.0))
        throw std::invalid_argument("NegativeRaman requires raman_detuning < 0");
}

inline std::string case_name(SimCase c) {
    return c == SimCase::PositiveRaman ? "positive" : "negative";
}

// Shared Gaussian envelope f(tau) = exp(-tau^2).
inline double rabi_envelope(double tau) { return std::exp(-tau * tau); }

// Omega_k(tau) = W_k exp(-tau^2) exp(i beta tau^2), k in 1..3.
inline Complex rabi(int k, double tau, const PulseSet& p) {
    Complex w;
    switch (k) {
        case 1: w = p.w1; break;
        case 2: w = p.w2; break;
        case 3: w = p.w3; break;
        default: throw std::invalid_argument("rabi: field index must be 1, 2 or 3");
    }
    const double phase = p.beta * tau * tau;
    return w * rabi_envelope(tau) * Complex(std::cos(phase), std::sin(phase));
}

// Rotating-frame Hamiltonian with the chirp phase kept inside the couplings
// and constant diagonal detunings (frame A). Row/column order (0,1,2,3).
inline Matrix4c bare_hamiltonian(double tau, const PulseSet& p) {
    Matrix4c h = Matrix4c::Zero();
    for (int k = 1; k <= 3; ++k) {
        const Complex om = rabi(k, tau, p);
        h(0, k) = om;
        h(k, 0) = std::conj(om);
    }
    h(1, 1) = Complex(-p.delta, 0.0);
    h(2, 2) = Complex(-p.delta, 0.0);
    h(3, 3) = Complex(-p.delta3(), 0.0);
    return h;
}

inline void require_nondegenerate_basis(const PulseSet& p) {
    if (!(p.raman_pair_norm2() > 0.0))
        throw std::domain_error("dark-bright basis undefined: w1 = w2 = 0");
    if (!(std::abs(p.w3) > 0.0))
        throw std::domain_error("dark-bright basis undefined: w3 = 0");
}

// Orthonormal dark-bright superposition vectors over the bare states, in the
// order (|db1>, |db2>, |db3>, |db4>). Components are bare-state amplitudes
// with index 0 = excited.
inline std::array<Vector4c, 4> dark_bright_basis(const PulseSet& p) {
    require_nondegenerate_basis(p);
    const double n12 = p.raman_pair_norm();
    std::array<Vector4c, 4> b;
    b[0] = Vector4c::Zero();
    b[0](1) = std::conj(p.w2) / n12;
    b[0](2) = -std::conj(p.w1) / n12;
    b[1] = Vector4c::Zero();
    b[1](1) = p.w1 / n12;
    b[1](2) = p.w2 / n12;
    b[2] = Vector4c::Zero();
    b[2](3) = p.w3 / std::abs(p.w3);
    b[3] = Vector4c::Zero();
    b[3](0) = 1.0;
    return b;
}

// Hamiltonian in the dark-bright basis (frame B: real envelopes, the chirp
// moved onto the diagonal). Indices follow (db1, db2, db3, db4).
inline Eigen::Matrix4d dark_bright_hamiltonian(double tau, const PulseSet& p) {
    require_nondegenerate_basis(p);
    const double f = rabi_envelope(tau);
    const double a = f * p.raman_pair_norm();
    const double b = f * std::abs(p.w3);
    Eigen::Matrix4d h = Eigen::Matrix4d::Zero();
    h(1, 3) = a;
    h(3, 1) = a;
    h(2, 2) = p.raman_detuning;
    h(2, 3) = b;
    h(3, 2) = b;
    h(3, 3) = 2.0 * p.beta * tau + p.delta;
    return h;
}

// Relaxation contribution R/(i hbar) to d(rho)/d(tau). Trace-free and
// Hermiticity-preserving.
inline Matrix4c relaxation_term(const Matrix4c& rho, const RelaxationRates& r) {
    const double gamma = r.total_decay();
    const std::array<double, 3> branch{r.gamma_sp_1, r.gamma_sp_2, r.gamma_sp_3};
    const std::array<double, 3> opt{r.deph_01, r.deph_02, r.deph_03};
    Matrix4c out = Matrix4c::Zero();
    out(0, 0) = -gamma * rho(0, 0);
    for (int k = 1; k <= 3; ++k) {
        out(k, k) = branch[static_cast<std::size_t>(k - 1)] * rho(0, 0);
        const double g0k = 0.5 * gamma + opt[static_cast<std::size_t>(k - 1)];
        out(0, k) = -g0k * rho(0, k);
        out(k, 0) = -g0k * rho(k, 0);
    }
    out(1, 2) = -r.deph_12 * rho(1, 2);
    out(2, 1) = -r.deph_12 * rho(2, 1);
    out(1, 3) = -r.deph_13 * rho(1, 3);
    out(3, 1) = -r.deph_13 * rho(3, 1);
    out(2, 3) = -r.deph_23 * rho(2, 3);
    out(3, 2) = -r.deph_23 * rho(3, 2);
    return out;
}

// Pure initial state: |1><1| for positive Raman detuning, |3><3| for negative.
inline DensityMatrix initial_density(SimCase c) {
    DensityMatrix rho = DensityMatrix::Zero();
    if (c == SimCase::PositiveRaman)
        rho(1, 1) = 1.0;
    else
        rho(3, 3) = 1.0;
    return rho;
}

// --- density-matrix diagnostics ---

inline double trace_error(const DensityMatrix& rho) {
    return std::abs(rho.trace() - Complex(1.0, 0.0));
}

inline double hermiticity_error(const DensityMatrix& rho) {
    return (rho - rho.adjoint().eval()).cwiseAbs().maxCoeff();
}

inline double min_eigenvalue(const DensityMatrix& rho) {
    const Matrix4c sym = 0.5 * (rho + rho.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<Matrix4c> es(sym, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

inline double purity(const DensityMatrix& rho) {
    return (rho * rho).trace().real();
}

}  // namespace tripod::model
