// Maxwell-Boltzmann detuning distribution of a thermal gas and quadrature
// averaging of final density matrices over it. This is the only module where
// SI quantities enter; everything downstream of `shifted` is dimensionless
// again.
#pragma once

#include "tripod/detail/parallel.hpp"
#include "tripod/lindblad.hpp"
#include "tripod/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace tripod::doppler {

using model::DensityMatrix;
using model::PulseSet;

// CODATA values, fixed for bit-reproducible output.
namespace constants {
inline constexpr double speed_of_light = 299792458.0;        // m/s
inline constexpr double boltzmann = 1.380649e-23;            // J/K
inline constexpr double atomic_mass_unit = 1.66053906660e-27;  // kg
}  // namespace constants

struct GasSpec {
    double mass_amu = 86.909;
    double transition_freq_hz = 3.84230e14;
    double pulse_duration_s = 1e-6;
    double temperature_k = 300.0;

    void validate() const {
        for (double v : {mass_amu, transition_freq_hz, pulse_duration_s, temperature_k}) {
            if (!(v > 0.0)) throw std::invalid_argument("GasSpec fields must be positive");
        }
    }
};

struct QuadratureSpec {
    int node_count = 201;
    double half_width_sigmas = 5.0;

    void validate() const {
        if (node_count < 3) throw std::invalid_argument("node_count must be >= 3");
        if (node_count % 2 == 0)
            throw std::invalid_argument("node_count must be odd so delta = 0 is sampled");
        if (!(half_width_sigmas > 0.0))
            throw std::invalid_argument("half_width_sigmas must be positive");
    }
};

// Standard deviation of the dimensionless Doppler detuning:
// sigma = 2 pi f0 tau_p sqrt(kT / (m c^2)).
inline double detuning_sigma(const GasSpec& g) {
    g.validate();
    const double mc2 = g.mass_amu * constants::atomic_mass_unit * constants::speed_of_light *
                       constants::speed_of_light;
    return 2.0 * M_PI * g.transition_freq_hz * g.pulse_duration_s *
           std::sqrt(constants::boltzmann * g.temperature_k / mc2);
}

// P(delta), a zero-mean Gaussian normalized to unit integral.
inline double detuning_pdf(double delta_tilde, const GasSpec& g) {
    const double sigma = detuning_sigma(g);
    const double x = delta_tilde / sigma;
    return std::exp(-0.5 * x * x) / (sigma * std::sqrt(2.0 * M_PI));
}

// Common one-photon Doppler shift for co-propagating fields: delta moves,
// the Raman detuning stays. field3_scale != 1 scales the shift seen by the
// out-of-resonance field for sensitivity studies.
inline PulseSet shifted(const PulseSet& p, double delta_tilde, double field3_scale = 1.0) {
    PulseSet out = p;
    out.delta += delta_tilde;
    out.raman_detuning += (1.0 - field3_scale) * delta_tilde;
    return out;
}

// Entrywise averages <rho_kl> over the thermal detuning distribution:
// trapezoid nodes on +/- half_width_sigmas * sigma, weighted by P and
// renormalized to unit total weight. Node integrations run concurrently; the
// reduction order is fixed.
inline DensityMatrix average_final(const PulseSet& p, const model::RelaxationRates& r,
                                   const GasSpec& g, const QuadratureSpec& q,
                                   const lindblad::IntegratorConfig& cfg, model::SimCase c,
                                   double field3_scale = 1.0) {
    g.validate();
    q.validate();
    cfg.validate();
    const double sigma = detuning_sigma(g);
    const double half_width = q.half_width_sigmas * sigma;
    const int n = q.node_count;
    const double step = 2.0 * half_width / (n - 1);

    std::vector<double> nodes(static_cast<std::size_t>(n));
    std::vector<double> weights(static_cast<std::size_t>(n));
    double wsum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double d = -half_width + step * i;
        const double trapezoid = (i == 0 || i == n - 1) ? 0.5 * step : step;
        nodes[static_cast<std::size_t>(i)] = d;
        weights[static_cast<std::size_t>(i)] = trapezoid * detuning_pdf(d, g);
        wsum += weights[static_cast<std::size_t>(i)];
    }
    for (auto& w : weights) w /= wsum;

    const DensityMatrix rho0 = model::initial_density(c);
    std::vector<DensityMatrix> finals(static_cast<std::size_t>(n));
    detail::parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
        try {
            const PulseSet ps = shifted(p, nodes[i], field3_scale);
            finals[i] = lindblad::integrate(rho0, ps, r, cfg).final_state();
        } catch (const lindblad::IntegrationError& e) {
            throw std::runtime_error("average_final: node delta = " +
                                     std::to_string(nodes[i]) + ": " + e.what());
        }
    });

    DensityMatrix avg = DensityMatrix::Zero();
    for (std::size_t i = 0; i < finals.size(); ++i) avg += weights[i] * finals[i];
    return avg;
}

}  // namespace tripod::doppler
