/**
 * @file quantum.hpp
 * @brief Cooling and entanglement figures of merit from the steady-state
 *        covariance, together with their closed-form approximations close to
 *        the end of a stable branch.
 */
#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>

#include "optomech/dynamics.hpp"
#include "optomech/params.hpp"
#include "optomech/steady.hpp"
#include "optomech/working_point.hpp"

namespace optomech {

struct Occupancies {
    double phonons = 0.0;
    double photons = 0.0;
};

/// n_m = (V11 + V22 - 1)/2 and n_o = (V33 + V44 - 1)/2, unclamped.
inline Occupancies occupancies(const CovarianceMatrix& v) {
    return {(v.m(0, 0) + v.m(1, 1) - 1.0) / 2.0, (v.m(2, 2) + v.m(3, 3) - 1.0) / 2.0};
}

inline constexpr double default_validity_threshold = 0.01;

struct EntanglementReport {
    double sigma = 0.0;   // det A + det B - 2 det C
    double det_v = 0.0;
    double nu_min = 0.0;  // smallest symplectic eigenvalue of the partial transpose
    double log_negativity = 0.0;
    double phonons = 0.0;
    double photons = 0.0;
    bool validity_ok = true;
    double validity_ratio = 0.0;  // n_o / |alpha_s|^2
};

/**
 * @brief Logarithmic negativity of the mechanical/optical bipartition.
 *
 * Fills sigma, det_v, nu_min and log_negativity. Throws NumericalError when
 * sigma^2 - 4 det V is negative beyond round-off, which no physical V can
 * produce.
 */
inline EntanglementReport log_negativity(const CovarianceMatrix& v) {
    EntanglementReport r;
    r.sigma = v.mechanical_block().determinant() + v.optical_block().determinant() -
              2.0 * v.cross_block().determinant();
    r.det_v = v.m.determinant();
    double disc = r.sigma * r.sigma - 4.0 * r.det_v;
    if (disc < 0.0) {
        if (disc < -1e-9 * std::max(1.0, r.sigma * r.sigma))
            throw NumericalError("covariance matrix is unphysical: negative partial-transpose discriminant " +
                                 std::to_string(disc));
        disc = 0.0;
    }
    // (sigma - sqrt(disc)) / 2 rewritten to avoid cancellation at large sigma
    const double nu_sq = 2.0 * r.det_v / (r.sigma + std::sqrt(disc));
    if (!(nu_sq > 0.0)) throw NumericalError("covariance matrix is unphysical: non-positive symplectic eigenvalue");
    r.nu_min = std::sqrt(nu_sq);
    r.log_negativity = std::max(0.0, -std::log(2.0 * r.nu_min));
    return r;
}

/// Entanglement plus occupancies and the linearization guard
/// n_o <= threshold * |alpha_s|^2.
inline EntanglementReport entanglement_report(const CovarianceMatrix& v, double intracavity_photons,
                                              double validity_threshold = default_validity_threshold) {
    EntanglementReport r = log_negativity(v);
    const Occupancies occ = occupancies(v);
    r.phonons = occ.phonons;
    r.photons = occ.photons;
    if (intracavity_photons > 0.0)
        r.validity_ratio = r.photons / intracavity_photons;
    else
        r.validity_ratio = r.photons <= 1e-9 ? 0.0 : std::numeric_limits<double>::infinity();
    r.validity_ok = r.validity_ratio <= validity_threshold;
    return r;
}

// ---------------------------------------------------------------------------
// Closed forms valid for omega_m >> gamma_m and kappa >> nbar gamma_m.

/// Approximate mean phonon number at effective detuning Delta and
/// bistability parameter eta in (0, 1].
inline double approx_phonons(double detuning, double kappa, double omega_m, double eta) {
    if (!(eta > 0.0)) throw ValidationError("eta", "approximation requires eta > 0");
    if (!(detuning > 0.0)) throw ValidationError("detuning", "approximation requires Delta > 0");
    const double k2d2 = detuning * detuning + kappa * kappa;
    return (k2d2 * (1.0 + eta) - 2.0 * eta * omega_m * (2.0 * detuning - omega_m)) / (8.0 * detuning * eta * omega_m);
}

/// Approximate intracavity fluctuation photon number.
inline double approx_photons(double detuning, double kappa, double eta) {
    if (!(eta > 0.0)) throw ValidationError("eta", "approximation requires eta > 0");
    if (!(detuning > 0.0)) throw ValidationError("detuning", "approximation requires Delta > 0");
    return (1.0 - eta) * (kappa * kappa + detuning * detuning) / (8.0 * eta * detuning * detuning);
}

/// Detuning minimizing approx_phonons at eta = 1.
inline double optimal_cooling_detuning(double kappa, double omega_m) { return std::hypot(kappa, omega_m); }

/// approx_phonons at eta = 1 and the optimal cooling detuning.
inline double minimal_phonons(double kappa, double omega_m) {
    return 0.5 * (std::hypot(kappa, omega_m) / omega_m - 1.0);
}

/// kappa^2 / (4 omega_m^2): minimal_phonons for kappa << omega_m.
inline double resolved_sideband_phonons(double kappa, double omega_m) {
    return kappa * kappa / (4.0 * omega_m * omega_m);
}

/// Coefficients of sigma = a + b/eta and det V = c + d/eta for eta -> 0,
/// and the resulting linear law E_N = max{0, alpha + beta eta}.
struct AsymptoticCoeffs {
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
    double alpha = 0.0;
    double beta = 0.0;

    double sigma(double eta) const { return a + b / eta; }
    double det_v(double eta) const { return c + d / eta; }
    double log_negativity(double eta) const { return std::max(0.0, alpha + beta * eta); }
    /// Limit of E_N at the end of the branch (eta = 0).
    double limit_value() const { return std::max(0.0, alpha); }
};

inline AsymptoticCoeffs asymptotic_coeffs(double detuning, double kappa, double omega_m) {
    if (!(detuning > 0.0)) throw ValidationError("detuning", "must be > 0");
    if (!(omega_m > 0.0)) throw ValidationError("omega_m", "must be > 0");
    const double d2 = detuning * detuning, k2 = kappa * kappa, w2 = omega_m * omega_m;
    const double d4 = d2 * d2;
    AsymptoticCoeffs co;
    co.a = (d2 - 3.0 * k2 + w2) / (16.0 * d2);
    co.b = (d2 + k2) * (d2 + k2 + 5.0 * w2) / (16.0 * d2 * w2);
    co.c = (2.0 * d2 * (d2 + k2) + (d2 - k2) * w2) / (128.0 * d4);
    co.d = (d2 + k2) * (4.0 * d4 + 4.0 * d2 * k2 + 4.0 * d2 * w2 + w2 * w2) / (256.0 * d4 * w2);
    co.alpha = -std::log(2.0 * std::sqrt(co.d / co.b));
    co.beta = (co.a * co.b * co.d - co.b * co.b * co.c - co.d * co.d) / (2.0 * co.d * co.b * co.b);
    return co;
}

/// Entanglement regimes close to the end of a stable branch:
///  first  - alpha < 0, beta < 0: no entanglement near eta = 0
///  second - beta > 0: entanglement peaks at some interior eta
///  third  - alpha > 0, beta < 0: entanglement peaks at eta = 0
enum class Regime { first = 1, second = 2, third = 3, boundary = 0 };

inline Regime classify_regime(const AsymptoticCoeffs& co, double tie = 1e-12) {
    if (std::abs(co.alpha) <= tie || std::abs(co.beta) <= tie) return Regime::boundary;
    if (co.beta > 0.0) return Regime::second;
    return co.alpha > 0.0 ? Regime::third : Regime::first;
}

/// Effective detuning maximizing the branch-end entanglement alpha.
inline double optimal_entanglement_detuning(double kappa, double omega_m) {
    const double ratio = kappa / omega_m;
    return omega_m / 4.0 * std::sqrt(1.0 + std::sqrt(16.0 * ratio * ratio + 81.0));
}

/// Closed-form maximum of the branch-end entanglement. Equals alpha at
/// optimal_entanglement_detuning exactly for kappa = 0; for kappa > 0 the
/// closed form sits slightly below it (about 1e-3 at kappa = 1.4 omega_m).
inline double max_entanglement(double kappa, double omega_m) {
    const double k2 = kappa * kappa;
    return -std::log(std::sqrt(9.0 + 128.0 * k2 / (8.0 * k2 + 45.0 * omega_m * omega_m)) / 5.0);
}

// ---------------------------------------------------------------------------

enum class PointStatus { ok, unstable, marginal, numerical_failure };

constexpr std::string_view to_string(PointStatus s) {
    switch (s) {
        case PointStatus::ok: return "ok";
        case PointStatus::unstable: return "unstable";
        case PointStatus::marginal: return "marginal";
        case PointStatus::numerical_failure: return "numerical_failure";
    }
    return "?";
}

/// Working point together with whatever could be computed about its fluctuations.
struct PointAnalysis {
    WorkingPoint point;
    PointStatus status = PointStatus::ok;
    std::optional<CovarianceMatrix> covariance;
    std::optional<EntanglementReport> report;
    std::string message;
};

/// Runs dynamics and quantum stages for one working point. Unstable and
/// marginal points yield no covariance; numerical failures are captured.
inline PointAnalysis analyze_point(const WorkingPoint& wp, const ModelParams& mp,
                                   double validity_threshold = default_validity_threshold) {
    PointAnalysis out;
    out.point = wp;
    if (!wp.dynamically_stable) {
        out.status = PointStatus::unstable;
        return out;
    }
    if (wp.marginal) {
        out.status = PointStatus::marginal;
        return out;
    }
    try {
        const CovarianceMatrix v = solve_lyapunov(drift_matrix(wp, mp), diffusion_matrix(mp));
        out.report = entanglement_report(v, wp.photons, validity_threshold);
        out.covariance = v;
    } catch (const NumericalError& e) {
        out.status = PointStatus::numerical_failure;
        out.message = e.what();
        out.covariance.reset();
        out.report.reset();
    }
    return out;
}

/// Working point placed directly at effective detuning `detuning` and
/// coupling `coupling`, bypassing the steady-state solve. Photon number is
/// inferred as G^2 / (2 G0^2) when G0 > 0.
inline WorkingPoint working_point_from_linearization(const ModelParams& mp, double detuning, double coupling) {
    WorkingPoint wp;
    wp.effective_detuning = detuning;
    wp.coupling = coupling;
    wp.eta = bistability_parameter(detuning, coupling, mp.kappa, mp.omega_m);
    if (mp.g0 > 0.0) {
        wp.photons = coupling * coupling / (2.0 * mp.g0 * mp.g0);
        wp.q_s = mp.g0 * wp.photons / mp.omega_m;
        wp.alpha_s = std::sqrt(wp.photons);
    }
    const StabilityInfo info = spectral_stability(drift_matrix(wp, mp), marginal_rate_fraction * mp.omega_m);
    wp.dynamically_stable = info.stable;
    wp.marginal = info.marginal;
    return wp;
}

}  // namespace optomech
