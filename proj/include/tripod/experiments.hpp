// Declarative reproduction sweeps over the library plus deterministic table
// output. A SweepSpec names one experiment kind, the base parameter set and
// the swept axis; run_experiment executes the grid (concurrently where the
// points are independent) and returns a ResultTable whose metadata echoes
// every input needed to re-run it byte-for-byte.
#pragma once

#include "tripod/doppler.hpp"
#include "tripod/dressed.hpp"
#include "tripod/lindblad.hpp"
#include "tripod/model.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace tripod::experiments {

inline constexpr const char* kCodeVersion = "tripod 1.0.0";

enum class SweepKind {
    QuasienergyTrace,
    DynamicsTrace,
    RabiRatio,
    DetuningScan,
    ChirpTemperature,
    LongitudinalSweep,
    TransverseSweep,
    AmplitudeSensitivity,
};

inline std::string kind_name(SweepKind k) {
    switch (k) {
        case SweepKind::QuasienergyTrace: return "quasienergy_trace";
        case SweepKind::DynamicsTrace: return "dynamics_trace";
        case SweepKind::RabiRatio: return "rabi_ratio";
        case SweepKind::DetuningScan: return "detuning_scan";
        case SweepKind::ChirpTemperature: return "chirp_temperature";
        case SweepKind::LongitudinalSweep: return "longitudinal_sweep";
        case SweepKind::TransverseSweep: return "transverse_sweep";
        case SweepKind::AmplitudeSensitivity: return "amplitude_sensitivity";
    }
    throw std::logic_error("unreachable");
}

inline SweepKind kind_from_name(const std::string& name) {
    for (SweepKind k : {SweepKind::QuasienergyTrace, SweepKind::DynamicsTrace,
                        SweepKind::RabiRatio, SweepKind::DetuningScan,
                        SweepKind::ChirpTemperature, SweepKind::LongitudinalSweep,
                        SweepKind::TransverseSweep, SweepKind::AmplitudeSensitivity}) {
        if (kind_name(k) == name) return k;
    }
    throw std::invalid_argument("unknown sweep kind: " + name);
}

struct SweepSpec {
    SweepKind kind = SweepKind::DynamicsTrace;
    model::PulseSet pulses;
    model::RelaxationRates rates;
    model::SimCase sim_case = model::SimCase::PositiveRaman;
    lindblad::IntegratorConfig integrator;
    doppler::GasSpec gas;
    doppler::QuadratureSpec quadrature;
    std::vector<double> axis;  // empty = kind-specific default grid
    std::vector<double> temperatures{300.0, 500.0, 700.0};  // ChirpTemperature only
    double field3_shift_scale = 1.0;
};

struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::map<std::string, std::string> metadata;
};

enum class Format { csv, json };

namespace detail {

inline std::string fmt(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
    return buf;
}

inline std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    return out;
}

inline std::vector<double> logspace(double lo, double hi, int n) {
    std::vector<double> out(static_cast<std::size_t>(n));
    const double llo = std::log10(lo), lhi = std::log10(hi);
    for (int i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i)] = std::pow(10.0, llo + (lhi - llo) * i / (n - 1));
    return out;
}

inline std::vector<double> default_axis(const SweepSpec& s) {
    switch (s.kind) {
        case SweepKind::QuasienergyTrace:
        case SweepKind::DynamicsTrace:
            return linspace(s.integrator.t_start, s.integrator.t_end, s.integrator.sample_count);
        case SweepKind::RabiRatio:
            return linspace(0.0, 3.0, 61);
        case SweepKind::DetuningScan: {
            const double w = 5.0 * doppler::detuning_sigma(s.gas);
            return linspace(-w, w, 41);
        }
        case SweepKind::ChirpTemperature:
            return logspace(100.0, 3000.0, 30);
        case SweepKind::LongitudinalSweep:
        case SweepKind::TransverseSweep:
            return logspace(1e-3, 10.0, 25);
        case SweepKind::AmplitudeSensitivity: {
            const double w = std::abs(s.pulses.w1);
            return linspace(-0.2 * w, 0.2 * w, 41);
        }
    }
    throw std::logic_error("unreachable");
}

inline std::map<std::string, std::string> echo_metadata(const SweepSpec& s,
                                                        const std::vector<double>& axis) {
    std::map<std::string, std::string> m;
    auto put = [&](const std::string& k, double v) { m[k] = fmt(v, 17); };
    m["kind"] = kind_name(s.kind);
    m["case"] = model::case_name(s.sim_case);
    put("w1_re", s.pulses.w1.real());
    put("w1_im", s.pulses.w1.imag());
    put("w2_re", s.pulses.w2.real());
    put("w2_im", s.pulses.w2.imag());
    put("w3_re", s.pulses.w3.real());
    put("w3_im", s.pulses.w3.imag());
    put("beta", s.pulses.beta);
    put("delta", s.pulses.delta);
    put("raman_detuning", s.pulses.raman_detuning);
    put("gamma_sp_1", s.rates.gamma_sp_1);
    put("gamma_sp_2", s.rates.gamma_sp_2);
    put("gamma_sp_3", s.rates.gamma_sp_3);
    put("deph_01", s.rates.deph_01);
    put("deph_02", s.rates.deph_02);
    put("deph_03", s.rates.deph_03);
    put("deph_12", s.rates.deph_12);
    put("deph_13", s.rates.deph_13);
    put("deph_23", s.rates.deph_23);
    put("rel_tol", s.integrator.rel_tol);
    put("abs_tol", s.integrator.abs_tol);
    put("t_start", s.integrator.t_start);
    put("t_end", s.integrator.t_end);
    put("max_step", s.integrator.max_step);
    m["sample_count"] = std::to_string(s.integrator.sample_count);
    put("mass_amu", s.gas.mass_amu);
    put("transition_freq_hz", s.gas.transition_freq_hz);
    put("pulse_duration_s", s.gas.pulse_duration_s);
    put("temperature_k", s.gas.temperature_k);
    m["node_count"] = std::to_string(s.quadrature.node_count);
    put("half_width_sigmas", s.quadrature.half_width_sigmas);
    put("field3_shift_scale", s.field3_shift_scale);
    std::string ax, temps;
    for (double v : axis) ax += (ax.empty() ? "" : " ") + fmt(v, 17);
    for (double v : s.temperatures) temps += (temps.empty() ? "" : " ") + fmt(v, 17);
    m["axis"] = ax;
    m["temperatures"] = temps;
    m["code_version"] = kCodeVersion;
    m["constants_c_m_per_s"] = fmt(doppler::constants::speed_of_light, 17);
    m["constants_k_j_per_k"] = fmt(doppler::constants::boltzmann, 17);
    m["constants_u_kg"] = fmt(doppler::constants::atomic_mass_unit, 17);
    return m;
}

// Final state for one parameter point, with the grid coordinate attached to
// any integrator failure.
inline model::DensityMatrix final_state_at(const model::PulseSet& p,
                                           const model::RelaxationRates& r,
                                           const lindblad::IntegratorConfig& cfg,
                                           model::SimCase c, const std::string& kind,
                                           double coord) {
    try {
        return lindblad::integrate(model::initial_density(c), p, r, cfg).final_state();
    } catch (const lindblad::IntegrationError& e) {
        throw std::runtime_error(kind + " at axis = " + fmt(coord, 12) + ": " + e.what());
    }
}

}  // namespace detail

inline ResultTable run_experiment(const SweepSpec& s) {
    const std::vector<double> axis = s.axis.empty() ? detail::default_axis(s) : s.axis;
    if (axis.empty()) throw std::invalid_argument("empty sweep axis");

    ResultTable t;
    t.metadata = detail::echo_metadata(s, axis);
    const std::string kname = kind_name(s.kind);

    auto population_row = [](const model::DensityMatrix& rho) {
        return std::vector<double>{rho(0, 0).real(), rho(1, 1).real(), rho(2, 2).real(),
                                   rho(3, 3).real()};
    };

    switch (s.kind) {
        case SweepKind::QuasienergyTrace: {
            t.columns = {"tau", "lambda1", "lambda2", "lambda3", "lambda4"};
            t.rows.resize(axis.size());
            for (std::size_t i = 0; i < axis.size(); ++i) {
                const auto l = dressed::quasienergies(axis[i], s.pulses);
                t.rows[i] = {axis[i], l[0], l[1], l[2], l[3]};
            }
            break;
        }
        case SweepKind::DynamicsTrace: {
            t.columns = {"tau",       "rho00",     "rho11",     "rho22",    "rho33",
                         "abs_rho12", "arg_rho12", "abs_rho13", "abs_rho23"};
            lindblad::IntegratorConfig cfg = s.integrator;
            const auto traj =
                lindblad::integrate(model::initial_density(s.sim_case), s.pulses, s.rates, cfg);
            t.rows.resize(traj.times.size());
            for (std::size_t i = 0; i < traj.times.size(); ++i) {
                const auto& rho = traj.states[i];
                t.rows[i] = {traj.times[i],          rho(0, 0).real(),
                             rho(1, 1).real(),       rho(2, 2).real(),
                             rho(3, 3).real(),       std::abs(rho(1, 2)),
                             std::arg(rho(1, 2)),    std::abs(rho(1, 3)),
                             std::abs(rho(2, 3))};
            }
            break;
        }
        case SweepKind::RabiRatio: {
            t.columns = {"ratio_w2_w1", "abs_rho12_numeric", "abs_rho12_analytic"};
            t.rows.resize(axis.size());
            tripod::detail::parallel_for(axis.size(), [&](std::size_t i) {
                model::PulseSet p = s.pulses;
                p.w2 = p.w1 * axis[i];
                const auto rho =
                    detail::final_state_at(p, s.rates, s.integrator, s.sim_case, kname, axis[i]);
                const auto pred = dressed::adiabatic_final_state(s.sim_case, p);
                t.rows[i] = {axis[i], std::abs(rho(1, 2)), std::abs(pred(1, 2))};
            });
            break;
        }
        case SweepKind::DetuningScan: {
            t.columns = {"delta",     "rho00",     "rho11",     "rho22",    "rho33",
                         "abs_rho12", "abs_rho13", "abs_rho23"};
            t.rows.resize(axis.size());
            tripod::detail::parallel_for(axis.size(), [&](std::size_t i) {
                const model::PulseSet p =
                    doppler::shifted(s.pulses, axis[i], s.field3_shift_scale);
                const auto rho =
                    detail::final_state_at(p, s.rates, s.integrator, s.sim_case, kname, axis[i]);
                auto row = population_row(rho);
                t.rows[i] = {axis[i],  row[0], row[1], row[2], row[3],
                             std::abs(rho(1, 2)), std::abs(rho(1, 3)), std::abs(rho(2, 3))};
            });
            break;
        }
        case SweepKind::ChirpTemperature: {
            t.columns = {"beta"};
            for (double temp : s.temperatures)
                t.columns.push_back("abs_avg_rho12_T" + detail::fmt(temp, 12));
            t.rows.resize(axis.size());
            for (std::size_t i = 0; i < axis.size(); ++i) {
                model::PulseSet p = s.pulses;
                p.beta = axis[i];
                std::vector<double> row{axis[i]};
                for (double temp : s.temperatures) {
                    doppler::GasSpec gas = s.gas;
                    gas.temperature_k = temp;
                    const auto avg =
                        doppler::average_final(p, s.rates, gas, s.quadrature, s.integrator,
                                               s.sim_case, s.field3_shift_scale);
                    row.push_back(std::abs(avg(1, 2)));
                }
                t.rows[i] = row;
            }
            break;
        }
        case SweepKind::LongitudinalSweep:
        case SweepKind::TransverseSweep: {
            t.columns = {"rate",  "rho00",     "rho11",    "rho22",
                         "rho33", "abs_rho12", "arg_rho12"};
            t.rows.resize(axis.size());
            tripod::detail::parallel_for(axis.size(), [&](std::size_t i) {
                model::RelaxationRates r = s.rates;
                if (s.kind == SweepKind::LongitudinalSweep) {
                    // Equal branching of the total decay over the three
                    // ground states.
                    r.gamma_sp_1 = r.gamma_sp_2 = r.gamma_sp_3 = axis[i] / 3.0;
                } else {
                    r.deph_01 = r.deph_02 = r.deph_03 = axis[i];
                    r.deph_12 = r.deph_13 = r.deph_23 = axis[i];
                }
                const auto rho = detail::final_state_at(s.pulses, r, s.integrator, s.sim_case,
                                                        kname, axis[i]);
                auto row = population_row(rho);
                t.rows[i] = {axis[i], row[0],  row[1], row[2], row[3],
                             std::abs(rho(1, 2)), std::arg(rho(1, 2))};
            });
            break;
        }
        case SweepKind::AmplitudeSensitivity: {
            t.columns = {"delta_w", "ratio_w1_w2", "abs_rho12", "ratio_first_order"};
            const double a1 = std::abs(s.pulses.w1);
            const double a2 = std::abs(s.pulses.w2);
            t.rows.resize(axis.size());
            tripod::detail::parallel_for(axis.size(), [&](std::size_t i) {
                const double dw = axis[i];
                model::PulseSet p = s.pulses;
                p.w1 += dw * (a1 > 0.0 ? s.pulses.w1 / a1 : 1.0);
                p.w2 += dw * (a2 > 0.0 ? s.pulses.w2 / a2 : 1.0);
                const auto rho =
                    detail::final_state_at(p, s.rates, s.integrator, s.sim_case, kname, dw);
                const double estimate = (a1 / a2) * (1.0 + dw * (a2 - a1) / (a1 * a2));
                t.rows[i] = {dw, std::abs(p.w1) / std::abs(p.w2), std::abs(rho(1, 2)),
                             estimate};
            });
            break;
        }
    }
    return t;
}

// FNV-1a over the parameter echo (everything except code version and
// constants); names output files.
inline std::string sweep_hash(const ResultTable& t) {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&](const std::string& s) {
        for (unsigned char ch : s) {
            h ^= ch;
            h *= 1099511628211ull;
        }
    };
    for (const auto& [k, v] : t.metadata) {
        if (k == "code_version" || k.rfind("constants_", 0) == 0) continue;
        mix(k);
        mix("=");
        mix(v);
        mix("\n");
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline void write_table(const ResultTable& t, Format format, std::ostream& out) {
    for (const auto& row : t.rows) {
        if (row.size() != t.columns.size())
            throw std::invalid_argument("ResultTable is not rectangular");
    }
    if (format == Format::csv) {
        for (const auto& [k, v] : t.metadata) out << "# " << k << " = " << v << "\n";
        for (std::size_t c = 0; c < t.columns.size(); ++c)
            out << (c ? "," : "") << t.columns[c];
        out << "\n";
        for (const auto& row : t.rows) {
            for (std::size_t c = 0; c < row.size(); ++c)
                out << (c ? "," : "") << detail::fmt(row[c], 12);
            out << "\n";
        }
    } else {
        nlohmann::json j;
        j["metadata"] = t.metadata;
        j["columns"] = t.columns;
        j["rows"] = t.rows;
        out << j.dump(2) << "\n";
    }
    if (!out) throw std::runtime_error("write_table: sink write failure");
}

}  // namespace tripod::experiments
