/**
 * @file params.hpp
 * @brief Experimental (SI) parameters of a driven optomechanical cavity and
 *        the derived model constants used by the rest of the library.
 *
 * All frequencies inside PhysicalParams and ModelParams are angular (rad/s).
 * Cyclic inputs are converted exactly once, at ingestion (see config.hpp or
 * PhysicalParams::from_cyclic).
 */
#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

namespace optomech {

/// Thrown when an input violates a documented precondition.
class ValidationError : public std::invalid_argument {
public:
    ValidationError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Thrown when a computation cannot produce a trustworthy number.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace constants {
inline constexpr double speed_of_light = 299792458.0;    // m/s
inline constexpr double hbar = 1.054571817e-34;           // J s
inline constexpr double boltzmann = 1.380649e-23;         // J/K
}  // namespace constants

enum class FrequencyConvention { angular, cyclic };

/// Converts a frequency given in `conv` into rad/s.
inline double to_angular(double value, FrequencyConvention conv) {
    return conv == FrequencyConvention::cyclic ? 2.0 * std::numbers::pi * value : value;
}

struct PhysicalParams {
    double cavity_length = 0.0;      // m
    double finesse = 0.0;
    double laser_wavelength = 0.0;   // m
    double laser_power = 0.0;        // W
    double mirror_mass = 0.0;        // kg
    double mech_freq = 0.0;          // rad/s
    double mech_damping = 0.0;       // rad/s
    double temperature = 0.0;        // K
    double bare_detuning = 0.0;      // rad/s, omega_c - omega_L
    std::optional<double> kappa_override;  // rad/s

    /// The reference parameter set: 1 mm cavity, finesse 1.07e4, 810 nm
    /// drive, 5 ng mirror at 10 MHz with 100 Hz damping, 400 mK bath and
    /// bare detuning 2.62 omega_m. Frequencies are read as cyclic unless
    /// `conv` says otherwise.
    static PhysicalParams reference(FrequencyConvention conv = FrequencyConvention::cyclic) {
        PhysicalParams p;
        p.cavity_length = 1e-3;
        p.finesse = 1.07e4;
        p.laser_wavelength = 810e-9;
        p.laser_power = 50e-3;
        p.mirror_mass = 5e-12;
        p.mech_freq = to_angular(10e6, conv);
        p.mech_damping = to_angular(100.0, conv);
        p.temperature = 0.4;
        p.bare_detuning = 2.62 * p.mech_freq;
        return p;
    }

    void validate() const {
        auto positive = [](double v, const char* name) {
            if (!std::isfinite(v) || v <= 0.0) throw ValidationError(name, "must be finite and > 0");
        };
        auto non_negative = [](double v, const char* name) {
            if (!std::isfinite(v) || v < 0.0) throw ValidationError(name, "must be finite and >= 0");
        };
        positive(cavity_length, "cavity_length");
        positive(finesse, "finesse");
        positive(laser_wavelength, "laser_wavelength");
        positive(mirror_mass, "mirror_mass");
        positive(mech_freq, "mech_freq");
        positive(mech_damping, "mech_damping");
        non_negative(laser_power, "laser_power");
        non_negative(temperature, "temperature");
        if (!std::isfinite(bare_detuning)) throw ValidationError("bare_detuning", "must be finite");
        if (kappa_override) positive(*kappa_override, "kappa_override");
    }
};

/// Mean thermal occupation [exp(hbar w / kB T) - 1]^-1, zero at T = 0.
inline double thermal_occupation(double omega, double temperature) {
    if (temperature <= 0.0) return 0.0;
    return 1.0 / std::expm1(constants::hbar * omega / (constants::boltzmann * temperature));
}

/**
 * @brief Model constants of the linearized optomechanical problem.
 *
 * Every rate is expressed in a common unit; `frequency_unit` records how
 * many rad/s one unit is (1 for SI, omega_m after normalize()).
 */
struct ModelParams {
    double kappa = 0.0;          // cavity amplitude decay rate
    double g0 = 0.0;             // single-photon coupling per unit dimensionless displacement
    double drive = 0.0;          // E, so that |E|^2 = 2 P kappa / (hbar omega_L)
    double bare_detuning = 0.0;  // Delta_0
    double omega_m = 0.0;
    double gamma_m = 0.0;
    double nbar = 0.0;
    /// E / sqrt(P): converts input power in W into the drive amplitude.
    double drive_per_sqrt_watt = 0.0;
    double frequency_unit = 1.0;  // rad/s per unit

    double drive_for_power(double power_w) const { return drive_per_sqrt_watt * std::sqrt(power_w); }

    double power_for_drive(double drive_amp) const {
        return drive_per_sqrt_watt > 0.0 ? (drive_amp * drive_amp) / (drive_per_sqrt_watt * drive_per_sqrt_watt) : 0.0;
    }

    /// Returns a copy whose thermal occupation corresponds to `temperature` K.
    ModelParams at_temperature(double temperature) const {
        ModelParams out = *this;
        out.nbar = thermal_occupation(omega_m * frequency_unit, temperature);
        return out;
    }

    ModelParams with_power(double power_w) const {
        ModelParams out = *this;
        out.drive = drive_for_power(power_w);
        return out;
    }

    void validate() const {
        if (!(omega_m > 0.0) || !std::isfinite(omega_m)) throw ValidationError("omega_m", "must be finite and > 0");
        if (!(kappa > 0.0) || !std::isfinite(kappa)) throw ValidationError("kappa", "must be finite and > 0");
        if (!(gamma_m > 0.0) || !std::isfinite(gamma_m)) throw ValidationError("gamma_m", "must be finite and > 0");
        if (!(drive >= 0.0) || !std::isfinite(drive)) throw ValidationError("drive", "must be finite and >= 0");
        if (!(nbar >= 0.0) || !std::isfinite(nbar)) throw ValidationError("nbar", "must be finite and >= 0");
        if (!(g0 >= 0.0) || !std::isfinite(g0)) throw ValidationError("g0", "must be finite and >= 0");
        if (!std::isfinite(bare_detuning)) throw ValidationError("bare_detuning", "must be finite");
    }
};

/// Cavity amplitude decay rate pi c / (2 F L).
inline double kappa_from_finesse(double finesse, double cavity_length) {
    return std::numbers::pi * constants::speed_of_light / (2.0 * finesse * cavity_length);
}

inline ModelParams derive_model(const PhysicalParams& p) {
    p.validate();
    ModelParams mp;
    const double omega_laser = 2.0 * std::numbers::pi * constants::speed_of_light / p.laser_wavelength;
    const double omega_cavity = omega_laser + p.bare_detuning;
    if (!(omega_cavity > 0.0)) throw ValidationError("bare_detuning", "cavity frequency must stay positive");

    mp.kappa = p.kappa_override.value_or(kappa_from_finesse(p.finesse, p.cavity_length));
    mp.g0 = omega_cavity / p.cavity_length * std::sqrt(constants::hbar / (p.mirror_mass * p.mech_freq));
    mp.drive_per_sqrt_watt = std::sqrt(2.0 * mp.kappa / (constants::hbar * omega_laser));
    mp.drive = mp.drive_for_power(p.laser_power);
    mp.bare_detuning = p.bare_detuning;
    mp.omega_m = p.mech_freq;
    mp.gamma_m = p.mech_damping;
    mp.nbar = thermal_occupation(p.mech_freq, p.temperature);
    mp.frequency_unit = 1.0;
    return mp;
}

namespace detail {
inline ModelParams scale_rates(const ModelParams& mp, double factor) {
    ModelParams out = mp;
    out.kappa *= factor;
    out.g0 *= factor;
    out.drive *= factor;
    out.bare_detuning *= factor;
    out.omega_m *= factor;
    out.gamma_m *= factor;
    out.drive_per_sqrt_watt *= factor;
    out.frequency_unit /= factor;
    return out;
}
}  // namespace detail

/// Expresses every rate in units of omega_m (so omega_m == 1 afterwards).
inline ModelParams normalize(const ModelParams& mp) {
    if (!(mp.omega_m > 0.0)) throw ValidationError("omega_m", "must be > 0 to normalize");
    ModelParams out = detail::scale_rates(mp, 1.0 / mp.omega_m);
    out.omega_m = 1.0;
    return out;
}

/// Inverse of normalize(): returns rates in rad/s.
inline ModelParams denormalize(const ModelParams& mp) {
    return detail::scale_rates(mp, mp.frequency_unit);
}

}  // namespace optomech
