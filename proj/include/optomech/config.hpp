/**
 * @file config.hpp
 * @brief Flat `key = value` configuration files for PhysicalParams.
 *
 * Recognized keys: cavity_length_m, finesse, wavelength_m, power_W, mass_kg,
 * mech_freq, mech_damping, temperature_K, bare_detuning, freq_convention
 * (angular|cyclic), kappa_override. `#` starts a comment.
 *
 * mech_freq, mech_damping, bare_detuning and kappa_override are read in the
 * declared frequency convention (cyclic by default). bare_detuning and
 * kappa_override also accept a trailing `wm`, meaning multiples of omega_m
 * (e.g. `bare_detuning = 2.62 wm`).
 */
#pragma once

#include <array>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>

#include "optomech/params.hpp"

namespace optomech {

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

inline double parse_number(std::string_view text, const std::string& key) {
    text = trim(text);
    double value = 0.0;
    const auto* begin = text.data();
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || !std::isfinite(value))
        throw ValidationError(key, "expected a finite number, got '" + std::string(text) + "'");
    return value;
}

/// A frequency that is either absolute or a multiple of omega_m.
struct FrequencyValue {
    double value = 0.0;
    bool in_units_of_omega_m = false;
};

inline FrequencyValue parse_frequency(std::string_view text, const std::string& key) {
    text = trim(text);
    FrequencyValue out;
    if (text.size() >= 2 && text.substr(text.size() - 2) == "wm") {
        out.in_units_of_omega_m = true;
        text = trim(text.substr(0, text.size() - 2));
    }
    out.value = parse_number(text, key);
    return out;
}

}  // namespace detail

inline constexpr std::array<std::string_view, 11> config_keys = {
    "cavity_length_m", "finesse",       "wavelength_m",  "power_W",          "mass_kg",        "mech_freq",
    "mech_damping",    "temperature_K", "bare_detuning", "freq_convention", "kappa_override"};

/// Parses configuration text. Every key except kappa_override and
/// freq_convention is mandatory; unknown or duplicate keys are rejected.
inline PhysicalParams parse_config(std::string_view text) {
    std::map<std::string, std::string, std::less<>> entries;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = line;
        if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
        view = detail::trim(view);
        if (view.empty()) continue;
        const auto eq = view.find('=');
        if (eq == std::string_view::npos)
            throw ValidationError("line " + std::to_string(line_no), "expected 'key = value'");
        const std::string key(detail::trim(view.substr(0, eq)));
        const std::string value(detail::trim(view.substr(eq + 1)));
        bool known = false;
        for (auto k : config_keys) known = known || (k == key);
        if (!known) throw ValidationError(key, "unknown configuration key");
        if (!entries.emplace(key, value).second) throw ValidationError(key, "duplicate key");
    }

    auto require = [&](std::string_view key) -> const std::string& {
        auto it = entries.find(key);
        if (it == entries.end()) throw ValidationError(std::string(key), "missing mandatory key");
        return it->second;
    };

    FrequencyConvention conv = FrequencyConvention::cyclic;
    if (auto it = entries.find("freq_convention"); it != entries.end()) {
        if (it->second == "angular")
            conv = FrequencyConvention::angular;
        else if (it->second != "cyclic")
            throw ValidationError("freq_convention", "expected 'angular' or 'cyclic'");
    }

    PhysicalParams p;
    p.cavity_length = detail::parse_number(require("cavity_length_m"), "cavity_length_m");
    p.finesse = detail::parse_number(require("finesse"), "finesse");
    p.laser_wavelength = detail::parse_number(require("wavelength_m"), "wavelength_m");
    p.laser_power = detail::parse_number(require("power_W"), "power_W");
    p.mirror_mass = detail::parse_number(require("mass_kg"), "mass_kg");
    p.mech_freq = to_angular(detail::parse_number(require("mech_freq"), "mech_freq"), conv);
    p.mech_damping = to_angular(detail::parse_number(require("mech_damping"), "mech_damping"), conv);
    p.temperature = detail::parse_number(require("temperature_K"), "temperature_K");

    auto resolve = [&](const detail::FrequencyValue& f) {
        return f.in_units_of_omega_m ? f.value * p.mech_freq : to_angular(f.value, conv);
    };
    p.bare_detuning = resolve(detail::parse_frequency(require("bare_detuning"), "bare_detuning"));
    if (auto it = entries.find("kappa_override"); it != entries.end())
        p.kappa_override = resolve(detail::parse_frequency(it->second, "kappa_override"));

    p.validate();
    return p;
}

inline PhysicalParams load_config(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw ValidationError("config", "cannot open '" + path + "'");
    std::stringstream buffer;
    buffer << file.rdbuf();
    return parse_config(buffer.str());
}

/// The reference parameter set as configuration text.
inline constexpr std::string_view reference_config_text =
    "# Fabry-Perot cavity with a 5 ng, 10 MHz mirror\n"
    "cavity_length_m = 1e-3\n"
    "finesse = 1.07e4\n"
    "wavelength_m = 810e-9\n"
    "power_W = 50e-3\n"
    "mass_kg = 5e-12\n"
    "mech_freq = 10e6\n"
    "mech_damping = 100\n"
    "temperature_K = 0.4\n"
    "bare_detuning = 2.62 wm\n"
    "freq_convention = cyclic\n";

}  // namespace optomech
