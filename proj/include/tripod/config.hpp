// Key-value run configuration. Physics parameters live only in the config
// file; the CLI controls I/O. Unknown keys are rejected and every applied
// default is echoed into the result metadata via the SweepSpec.
#pragma once

#include "tripod/experiments.hpp"

#include <cctype>
#include <complex>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace tripod::cli {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A fully validated experiment description plus output preferences.
struct RunConfig {
    experiments::SweepSpec sweep;
    std::string out_dir = ".";
    experiments::Format format = experiments::Format::csv;
    bool has_kind = false;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    std::size_t e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

inline double parse_real(const std::string& value, const std::string& key, int line) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &pos);
    } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(line) + ": expected a number for key '" +
                          key + "', got '" + value + "'");
    }
    if (trim(value.substr(pos)) != "")
        throw ConfigError("line " + std::to_string(line) + ": trailing text after number for key '" +
                          key + "': '" + value + "'");
    return v;
}

inline long parse_int(const std::string& value, const std::string& key, int line) {
    const double v = parse_real(value, key, line);
    const long n = static_cast<long>(v);
    if (static_cast<double>(n) != v)
        throw ConfigError("line " + std::to_string(line) + ": expected an integer for key '" +
                          key + "'");
    return n;
}

inline std::vector<double> parse_list(const std::string& value, const std::string& key,
                                      int line) {
    std::vector<double> out;
    std::string item;
    std::istringstream in(value);
    while (std::getline(in, item, ',')) out.push_back(parse_real(trim(item), key, line));
    if (out.empty())
        throw ConfigError("line " + std::to_string(line) + ": empty list for key '" + key + "'");
    return out;
}

// "500" or "500, 30" (real, imaginary parts).
inline std::complex<double> parse_complex(const std::string& value, const std::string& key,
                                          int line) {
    const auto parts = parse_list(value, key, line);
    if (parts.size() == 1) return {parts[0], 0.0};
    if (parts.size() == 2) return {parts[0], parts[1]};
    throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                      "' takes one (real) or two (real, imag) numbers");
}

inline bool parse_bool(const std::string& value, const std::string& key, int line) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError("line " + std::to_string(line) + ": expected true/false for key '" + key +
                      "'");
}

}  // namespace detail

inline RunConfig parse_config(const std::string& text) {
    RunConfig rc;
    experiments::SweepSpec& s = rc.sweep;

    std::set<std::string> seen;
    std::optional<std::string> case_value;
    std::optional<double> axis_min, axis_max;
    std::optional<long> axis_count;
    bool axis_log = false;

    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string stripped = raw;
        if (const auto hash = stripped.find('#'); hash != std::string::npos)
            stripped = stripped.substr(0, hash);
        stripped = detail::trim(stripped);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line) + ": expected 'key = value'");
        const std::string key = detail::trim(stripped.substr(0, eq));
        const std::string value = detail::trim(stripped.substr(eq + 1));
        if (key.empty())
            throw ConfigError("line " + std::to_string(line) + ": missing key");
        if (!seen.insert(key).second)
            throw ConfigError("line " + std::to_string(line) + ": duplicate key: " + key);

        auto real = [&] { return detail::parse_real(value, key, line); };
        auto integer = [&] { return detail::parse_int(value, key, line); };

        if (key == "w1") s.pulses.w1 = detail::parse_complex(value, key, line);
        else if (key == "w2") s.pulses.w2 = detail::parse_complex(value, key, line);
        else if (key == "w3") s.pulses.w3 = detail::parse_complex(value, key, line);
        else if (key == "beta") s.pulses.beta = real();
        else if (key == "delta") s.pulses.delta = real();
        else if (key == "raman_detuning") s.pulses.raman_detuning = real();
        else if (key == "case") case_value = value;
        else if (key == "gamma_sp_1") s.rates.gamma_sp_1 = real();
        else if (key == "gamma_sp_2") s.rates.gamma_sp_2 = real();
        else if (key == "gamma_sp_3") s.rates.gamma_sp_3 = real();
        else if (key == "deph_01") s.rates.deph_01 = real();
        else if (key == "deph_02") s.rates.deph_02 = real();
        else if (key == "deph_03") s.rates.deph_03 = real();
        else if (key == "deph_12") s.rates.deph_12 = real();
        else if (key == "deph_13") s.rates.deph_13 = real();
        else if (key == "deph_23") s.rates.deph_23 = real();
        else if (key == "rel_tol") s.integrator.rel_tol = real();
        else if (key == "abs_tol") s.integrator.abs_tol = real();
        else if (key == "t_start") s.integrator.t_start = real();
        else if (key == "t_end") s.integrator.t_end = real();
        else if (key == "max_step") s.integrator.max_step = real();
        else if (key == "sample_count") s.integrator.sample_count = static_cast<int>(integer());
        else if (key == "mass_amu") s.gas.mass_amu = real();
        else if (key == "transition_freq_hz") s.gas.transition_freq_hz = real();
        else if (key == "pulse_duration_s") s.gas.pulse_duration_s = real();
        else if (key == "temperature_k") s.gas.temperature_k = real();
        else if (key == "node_count") s.quadrature.node_count = static_cast<int>(integer());
        else if (key == "half_width_sigmas") s.quadrature.half_width_sigmas = real();
        else if (key == "field3_shift_scale") s.field3_shift_scale = real();
        else if (key == "kind") {
            try {
                s.kind = experiments::kind_from_name(value);
            } catch (const std::invalid_argument& e) {
                throw ConfigError("line " + std::to_string(line) + ": " + e.what());
            }
            rc.has_kind = true;
        } else if (key == "axis_min") axis_min = real();
        else if (key == "axis_max") axis_max = real();
        else if (key == "axis_count") axis_count = integer();
        else if (key == "axis_log") axis_log = detail::parse_bool(value, key, line);
        else if (key == "temperatures") s.temperatures = detail::parse_list(value, key, line);
        else if (key == "out_dir") rc.out_dir = value;
        else if (key == "format") {
            if (value == "csv") rc.format = experiments::Format::csv;
            else if (value == "json") rc.format = experiments::Format::json;
            else throw ConfigError("line " + std::to_string(line) + ": format must be csv or json");
        } else {
            throw ConfigError("unknown key: " + key + " (line " + std::to_string(line) + ")");
        }
    }

    for (const char* req : {"w1", "w2", "w3", "beta", "raman_detuning", "case"}) {
        if (!seen.count(req)) throw ConfigError(std::string("missing required key: ") + req);
    }
    if (*case_value == "positive") s.sim_case = model::SimCase::PositiveRaman;
    else if (*case_value == "negative") s.sim_case = model::SimCase::NegativeRaman;
    else throw ConfigError("key 'case' must be 'positive' or 'negative'");

    if (axis_min || axis_max || axis_count) {
        if (!(axis_min && axis_max && axis_count))
            throw ConfigError("axis_min, axis_max and axis_count must be given together");
        if (*axis_count < 2) throw ConfigError("axis_count must be >= 2");
        if (axis_log && (!(*axis_min > 0.0) || !(*axis_max > 0.0)))
            throw ConfigError("axis_log requires positive axis bounds");
        s.axis = axis_log
                     ? experiments::detail::logspace(*axis_min, *axis_max,
                                                     static_cast<int>(*axis_count))
                     : experiments::detail::linspace(*axis_min, *axis_max,
                                                     static_cast<int>(*axis_count));
    } else if (axis_log) {
        throw ConfigError("axis_log requires axis_min, axis_max and axis_count");
    }

    try {
        model::validate_case(s.sim_case, s.pulses);
        model::require_nondegenerate_basis(s.pulses);
        s.rates.validate();
        s.integrator.validate();
        s.gas.validate();
        s.quadrature.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("invalid configuration: ") + e.what());
    }
    return rc;
}

}  // namespace tripod::cli
