// Instantaneous eigenstructure of the dark-bright Hamiltonian, adiabaticity
// diagnostics and the closed-form adiabatic final states.
//
// Branch labels: lambda_1 is the dark root, exactly zero for all parameters.
// The remaining three roots never cross for nonzero envelope, so sorting is
// the continuity tracking: lambda_2 = lowest, lambda_3 = highest, and
// lambda_4 = middle, which is the branch connecting |db2> <-> |db3> and obeys
// 0 <= |lambda_4| <= |delta_13|.
#pragma once

#include "tripod/model.hpp"

#include <array>
#include <cmath>
#include <complex>

namespace tripod::dressed {

using model::Complex;
using model::DensityMatrix;
using model::PulseSet;
using model::SimCase;

// Quasienergies and unit eigenvectors of the dark-bright Hamiltonian at one
// instant. Vectors are real 4-vectors in the (db1, db2, db3, db4) basis.
struct DressedFrame {
    double tau = 0.0;
    std::array<double, 4> lambdas{};
    std::array<Eigen::Vector4d, 4> vectors{};
};

namespace detail {

// Eigen-solve of the coupled 3x3 block (db2, db3, db4); returns ascending
// eigenvalues and matching columns.
inline void coupled_block(double tau, const PulseSet& p, Eigen::Vector3d& evals,
                          Eigen::Matrix3d& evecs) {
    const Eigen::Matrix4d h = model::dark_bright_hamiltonian(tau, p);
    Eigen::Matrix3d m;
    m << h(1, 1), h(1, 2), h(1, 3),
         h(2, 1), h(2, 2), h(2, 3),
         h(3, 1), h(3, 2), h(3, 3);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es;
    es.computeDirect(m);
    evals = es.eigenvalues();
    evecs = es.eigenvectors();
}

}  // namespace detail

// (lambda_1, lambda_2, lambda_3, lambda_4) = (0, lowest, highest, middle).
inline std::array<double, 4> quasienergies(double tau, const PulseSet& p) {
    Eigen::Vector3d ev;
    Eigen::Matrix3d vec;
    detail::coupled_block(tau, p, ev, vec);
    return {0.0, ev(0), ev(2), ev(1)};
}

inline DressedFrame dressed_vectors(double tau, const PulseSet& p) {
    Eigen::Vector3d ev;
    Eigen::Matrix3d vec;
    detail::coupled_block(tau, p, ev, vec);

    DressedFrame frame;
    frame.tau = tau;
    frame.lambdas = {0.0, ev(0), ev(2), ev(1)};
    frame.vectors[0] = Eigen::Vector4d::UnitX();
    const std::array<int, 3> column_for{0, 2, 1};  // lambda_2, lambda_3, lambda_4
    for (int k = 0; k < 3; ++k) {
        Eigen::Vector4d v = Eigen::Vector4d::Zero();
        v.tail<3>() = vec.col(column_for[static_cast<std::size_t>(k)]);
        // Deterministic sign: largest-magnitude component positive.
        int imax = 0;
        v.cwiseAbs().maxCoeff(&imax);
        if (v(imax) < 0.0) v = -v;
        frame.vectors[static_cast<std::size_t>(k + 1)] = v;
    }
    return frame;
}

// |delta_13| / sqrt(|W1|^2 + |W2|^2), the bound on the relative excited-state
// admixture of the transfer branch.
inline double excited_admixture_bound(const PulseSet& p) {
    if (!(p.raman_pair_norm2() > 0.0))
        throw std::domain_error("excited_admixture_bound: w1 = w2 = 0");
    return std::abs(p.raman_detuning) / p.raman_pair_norm();
}

// Populations of the four dressed branches: p_k = <b_k| rho_db |b_k>, with
// rho taken to the dark-bright basis of frame B (chirp phase absorbed, so the
// only adjustment to the frame-A state is on the optical coherences).
inline std::array<double, 4> dressed_populations(const DensityMatrix& rho, double tau,
                                                 const PulseSet& p) {
    const double phase = p.beta * tau * tau;
    const Complex ph(std::cos(phase), -std::sin(phase));
    model::Matrix4c rho_b = rho;
    for (int k = 1; k <= 3; ++k) {
        rho_b(0, k) *= ph;
        rho_b(k, 0) *= std::conj(ph);
    }

    const auto basis = model::dark_bright_basis(p);
    model::Matrix4c b;
    for (int k = 0; k < 4; ++k) b.col(k) = basis[static_cast<std::size_t>(k)];
    const model::Matrix4c rho_db = b.adjoint() * rho_b * b;

    const DressedFrame frame = dressed_vectors(tau, p);
    std::array<double, 4> pops{};
    for (int k = 0; k < 4; ++k) {
        const Eigen::Vector4cd v = frame.vectors[static_cast<std::size_t>(k)].cast<Complex>();
        pops[static_cast<std::size_t>(k)] = (v.adjoint() * rho_db * v)(0).real();
    }
    return pops;
}

// Pure final state predicted by the adiabatic theorem, as an outer product in
// the bare basis. Positive Raman detuning: the bright share of |1> ends in
// |3> (with a pi phase); negative: |3> ends in the bright pair superposition.
inline DensityMatrix adiabatic_final_state(SimCase c, const PulseSet& p) {
    model::validate_case(c, p);
    model::require_nondegenerate_basis(p);
    const double n12 = p.raman_pair_norm();
    const Complex w3ph = p.w3 / std::abs(p.w3);

    Eigen::Vector4cd psi = Eigen::Vector4cd::Zero();
    if (c == SimCase::PositiveRaman) {
        psi(1) = std::norm(p.w2) / (n12 * n12);
        psi(2) = -p.w2 * std::conj(p.w1) / (n12 * n12);
        psi(3) = -std::conj(p.w1) * w3ph / n12;
    } else {
        const Complex pref = -std::conj(p.w3) / (std::abs(p.w3) * n12);
        psi(1) = pref * p.w1;
        psi(2) = pref * p.w2;
    }
    return psi * psi.adjoint();
}

}  // namespace tripod::dressed
