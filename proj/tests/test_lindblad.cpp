#include "tripod/lindblad.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace tripod;
using model::Complex;
using Catch::Approx;

namespace {

std::mt19937 rng(0xabcd);

Complex random_amplitude(double max_mag) {
    std::uniform_real_distribution<double> mag(0.5, max_mag);
    std::uniform_real_distribution<double> ph(0.0, 2.0 * M_PI);
    const double m = mag(rng), a = ph(rng);
    return {m * std::cos(a), m * std::sin(a)};
}

model::PulseSet random_pulses() {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    model::PulseSet p;
    p.w1 = random_amplitude(80.0);
    p.w2 = random_amplitude(80.0);
    p.w3 = random_amplitude(80.0);
    p.beta = 300.0 * u(rng);
    p.delta = 80.0 * u(rng);
    p.raman_detuning = 80.0 * u(rng);
    return p;
}

model::RelaxationRates random_rates() {
    std::uniform_real_distribution<double> u(0.0, 1.5);
    model::RelaxationRates r;
    r.gamma_sp_1 = u(rng);
    r.gamma_sp_2 = u(rng);
    r.gamma_sp_3 = u(rng);
    r.deph_01 = u(rng);
    r.deph_02 = u(rng);
    r.deph_03 = u(rng);
    r.deph_12 = u(rng);
    r.deph_13 = u(rng);
    r.deph_23 = u(rng);
    return r;
}

// Dephasings generated by independent phase noise per level, so the
// dynamics stay completely positive.
model::RelaxationRates consistent_rates() {
    std::uniform_real_distribution<double> u(0.0, 1.5);
    model::RelaxationRates r;
    r.gamma_sp_1 = u(rng);
    r.gamma_sp_2 = u(rng);
    r.gamma_sp_3 = u(rng);
    const double k0 = u(rng), k1 = u(rng), k2 = u(rng), k3 = u(rng);
    r.deph_01 = 0.5 * (k0 + k1);
    r.deph_02 = 0.5 * (k0 + k2);
    r.deph_03 = 0.5 * (k0 + k3);
    r.deph_12 = 0.5 * (k1 + k2);
    r.deph_13 = 0.5 * (k1 + k3);
    r.deph_23 = 0.5 * (k2 + k3);
    return r;
}

model::Matrix4c random_state() {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    model::Matrix4c m;
    for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) m(j, k) = Complex(u(rng), u(rng));
    model::Matrix4c rho = m * m.adjoint();
    return rho / rho.trace();
}

// Fiducial parameters: chirped adiabatic passage into a coherent superposition.
model::PulseSet fiducial_pulses() {
    model::PulseSet p;
    p.w1 = 500.0;
    p.w2 = 475.0;
    p.w3 = 525.0;
    p.beta = 2500.0;
    p.raman_detuning = 250.0;
    return p;
}

}  // namespace

TEST_CASE("integrator config validation") {
    lindblad::IntegratorConfig c;
    CHECK_NOTHROW(c.validate());
    c.sample_count = 1;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.t_start = 5.0;
    c.t_end = -5.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.rel_tol = 0.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("rhs structure") {
    SECTION("ground diagonal state with no field is stationary") {
        model::Matrix4c rho = model::Matrix4c::Zero();
        rho(1, 1) = 0.25;
        rho(2, 2) = 0.35;
        rho(3, 3) = 0.40;
        model::PulseSet p;
        p.delta = 20.0;
        p.raman_detuning = 5.0;
        const auto d = lindblad::rhs(0.0, rho, p, {});
        CHECK(d.cwiseAbs().maxCoeff() < 1e-15);
    }

    SECTION("excited population decays at the total rate") {
        model::Matrix4c rho = model::Matrix4c::Zero();
        rho(0, 0) = 1.0;
        model::RelaxationRates r;
        r.gamma_sp_1 = 0.3;
        r.gamma_sp_2 = 0.3;
        r.gamma_sp_3 = 0.4;
        const auto d = lindblad::rhs(0.0, rho, {}, r);
        CHECK(d(0, 0).real() == Approx(-1.0));
    }

    SECTION("trace-free and hermiticity-preserving for random draws") {
        for (int i = 0; i < 100; ++i) {
            const auto rho = random_state();
            const auto d = lindblad::rhs(0.3, rho, random_pulses(), random_rates());
            CHECK(std::abs(d.trace()) < 1e-11 * d.cwiseAbs().maxCoeff());
            CHECK((d - d.adjoint().eval()).cwiseAbs().maxCoeff() <
                  1e-12 * d.cwiseAbs().maxCoeff());
        }
    }
}

TEST_CASE("commutator rhs agrees with the element-wise transcription") {
    std::uniform_real_distribution<double> tdraw(-4.0, 4.0);
    for (int i = 0; i < 200; ++i) {
        const auto p = random_pulses();
        const auto r = random_rates();
        const auto rho = random_state();
        const double tau = tdraw(rng);
        const auto a = lindblad::rhs(tau, rho, p, r);
        const auto b = lindblad::detail::master_rhs_elementwise(tau, rho, p, r);
        const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
        CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12 * scale);
    }
}

TEST_CASE("field-free decay matches the exponential solution") {
    model::RelaxationRates r;
    r.gamma_sp_1 = 0.4;
    r.gamma_sp_2 = 0.3;
    r.gamma_sp_3 = 0.3;
    model::Matrix4c rho0 = model::Matrix4c::Zero();
    rho0(0, 0) = 1.0;
    lindblad::IntegratorConfig cfg;
    cfg.t_start = 0.0;
    cfg.t_end = 4.0;
    cfg.sample_count = 41;
    const auto traj = lindblad::integrate(rho0, {}, r, cfg);
    REQUIRE(traj.times.size() == 41);
    for (std::size_t n = 0; n < traj.times.size(); ++n) {
        const double expect = std::exp(-traj.times[n]);
        CHECK(traj.states[n](0, 0).real() == Approx(expect).margin(1e-7));
        CHECK(traj.excited_populations[n] == Approx(expect).margin(1e-7));
        // branching ratios
        CHECK(traj.states[n](1, 1).real() == Approx(0.4 * (1.0 - expect)).margin(1e-7));
    }
}

TEST_CASE("trajectory diagnostics stay clean under random parameters") {
    for (int i = 0; i < 10; ++i) {
        const auto p = random_pulses();
        const bool relax = (i % 2 == 0);
        const auto r = relax ? consistent_rates() : model::RelaxationRates{};
        lindblad::IntegratorConfig cfg;
        cfg.sample_count = 41;
        const auto traj =
            lindblad::integrate(model::initial_density(model::SimCase::PositiveRaman), p, r, cfg);
        for (std::size_t n = 0; n < traj.times.size(); ++n) {
            CHECK(traj.trace_errors[n] < 1e-10);
            CHECK(model::hermiticity_error(traj.states[n]) < 1e-12);
            CHECK(traj.min_eigenvalues[n] > -1e-6);
        }
        if (!relax) {
            CHECK(std::abs(model::purity(traj.final_state()) - 1.0) < 1e-5);
        }
    }
}

TEST_CASE("reference propagator") {
    const auto p = fiducial_pulses();
    const auto rho0 = model::initial_density(model::SimCase::PositiveRaman);

    SECTION("empty span returns the input") {
        const auto out = lindblad::reference_propagate(rho0, p, {}, 100, {1.0, 1.0});
        CHECK((out - rho0).cwiseAbs().maxCoeff() == 0.0);
    }

    SECTION("step count must be positive") {
        CHECK_THROWS_AS(lindblad::reference_propagate(rho0, p, {}, 0, {-5.0, 5.0}),
                        std::invalid_argument);
    }

    SECTION("converges to the adaptive result") {
        model::PulseSet mild;
        mild.w1 = 50.0;
        mild.w2 = 45.0;
        mild.w3 = 60.0;
        mild.beta = 100.0;
        mild.raman_detuning = 25.0;
        lindblad::IntegratorConfig tight;
        tight.rel_tol = 1e-12;
        tight.abs_tol = 1e-14;
        tight.sample_count = 2;
        const auto truth = lindblad::integrate(rho0, mild, {}, tight).final_state();
        double prev = -1.0;
        for (long steps : {4000L, 8000L, 16000L, 32000L}) {
            const auto ref = lindblad::reference_propagate(rho0, mild, {}, steps, {-5.0, 5.0});
            const double dev = (ref - truth).cwiseAbs().maxCoeff();
            if (prev >= 0.0) CHECK(dev < 0.2 * prev);  // ~4th-order convergence
            prev = dev;
        }
        CHECK(prev < 2e-8);
    }
}

TEST_CASE("chirped passage reaches the fiducial superposition") {
    const auto p = fiducial_pulses();
    const auto traj = lindblad::integrate(model::initial_density(model::SimCase::PositiveRaman),
                                          p, {}, {});
    const auto& rho = traj.final_state();
    CHECK(rho(0, 0).real() == Approx(0.0).margin(1e-3));
    CHECK(rho(1, 1).real() == Approx(0.22504).margin(5e-3));
    CHECK(rho(2, 2).real() == Approx(0.24935).margin(5e-3));
    CHECK(rho(3, 3).real() == Approx(0.52562).margin(5e-3));
    CHECK(std::abs(rho(1, 2)) == Approx(0.23688).margin(5e-3));

    double max_excited = 0.0;
    for (double pe : traj.excited_populations) max_excited = std::max(max_excited, pe);
    CHECK(max_excited < 0.02);
}

TEST_CASE("sample grid honours the requested span") {
    lindblad::IntegratorConfig cfg;
    cfg.t_start = -2.0;
    cfg.t_end = 3.0;
    cfg.sample_count = 11;
    const auto traj = lindblad::integrate(model::initial_density(model::SimCase::PositiveRaman),
                                          fiducial_pulses(), {}, cfg);
    REQUIRE(traj.times.size() == 11);
    CHECK(traj.times.front() == -2.0);
    CHECK(traj.times.back() == 3.0);
    CHECK(traj.times[4] == Approx(0.0).margin(1e-12));
}
