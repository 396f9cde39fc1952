/**
 * @file dynamics.hpp
 * @brief Linearized Gaussian fluctuation dynamics around a steady state.
 *
 * State ordering is (dq, dp, X, Y): mirror position and momentum, then the
 * amplitude and phase quadratures of the cavity field. Covariances use the
 * symmetric convention V_ij = <u_i u_j + u_j u_i>/2, so vacuum is I/2.
 */
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <string>

#include "optomech/params.hpp"
#include "optomech/working_point.hpp"

namespace optomech {

using Matrix4 = Eigen::Matrix4d;
using Matrix2 = Eigen::Matrix2d;

struct DriftMatrix {
    Matrix4 m = Matrix4::Zero();
};

struct DiffusionMatrix {
    Matrix4 m = Matrix4::Zero();
};

/// Symmetric 4x4 covariance split as [[A, C], [C^T, B]] with A mechanical,
/// B optical and C the cross block.
struct CovarianceMatrix {
    Matrix4 m = Matrix4::Zero();

    Matrix2 mechanical_block() const { return m.topLeftCorner<2, 2>(); }
    Matrix2 optical_block() const { return m.bottomRightCorner<2, 2>(); }
    Matrix2 cross_block() const { return m.topRightCorner<2, 2>(); }

    double asymmetry() const { return (m - m.transpose()).cwiseAbs().maxCoeff(); }

    /// Symplectic eigenvalues (nu_minus, nu_plus), ascending. Taken from the
    /// Hermitian matrix i V^1/2 Omega V^1/2 (same spectrum as i Omega V), which
    /// stays well conditioned when the two values nearly coincide. A V that is
    /// not positive definite reports nu_minus = 0.
    std::array<double, 2> symplectic_eigenvalues() const {
        const Matrix4 sym = 0.5 * (m + m.transpose());
        Eigen::SelfAdjointEigenSolver<Matrix4> es(sym);
        if (!(es.eigenvalues().minCoeff() > 0.0)) return {0.0, std::max(0.0, es.eigenvalues().maxCoeff())};
        const Matrix4 root = es.operatorSqrt();
        Matrix4 omega = Matrix4::Zero();
        omega(0, 1) = omega(2, 3) = 1.0;
        omega(1, 0) = omega(3, 2) = -1.0;
        const Eigen::Matrix4cd h = std::complex<double>(0.0, 1.0) * (root * omega * root).cast<std::complex<double>>();
        const Eigen::Vector4d ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd>(h, Eigen::EigenvaluesOnly).eigenvalues();
        // eigenvalues come in +-nu pairs, sorted ascending: -nu_plus, -nu_minus, nu_minus, nu_plus
        return {0.5 * (ev[2] - ev[1]), 0.5 * (ev[3] - ev[0])};
    }

    /// Symmetric and compatible with the uncertainty principle.
    bool is_physical(double slack = 1e-9) const {
        const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
        if (asymmetry() > 1e-10 * scale) return false;
        return symplectic_eigenvalues()[0] >= 0.5 - slack;
    }
};

/// Drift matrix of the linearized Langevin equations.
inline DriftMatrix drift_matrix(double omega_m, double gamma_m, double kappa, double detuning, double coupling) {
    DriftMatrix a;
    a.m(0, 1) = omega_m;
    a.m(1, 0) = -omega_m;
    a.m(1, 1) = -gamma_m;
    a.m(1, 2) = coupling;
    a.m(2, 2) = -kappa;
    a.m(2, 3) = detuning;
    a.m(3, 0) = coupling;
    a.m(3, 2) = -detuning;
    a.m(3, 3) = -kappa;
    return a;
}

inline DriftMatrix drift_matrix(const WorkingPoint& wp, const ModelParams& mp) {
    return drift_matrix(mp.omega_m, mp.gamma_m, mp.kappa, wp.effective_detuning, wp.coupling);
}

/// diag(0, gamma_m (2 nbar + 1), kappa, kappa): Markovian Brownian force on
/// the momentum and vacuum input noise on both optical quadratures.
inline DiffusionMatrix diffusion_matrix(double gamma_m, double nbar, double kappa) {
    DiffusionMatrix d;
    d.m(1, 1) = gamma_m * (2.0 * nbar + 1.0);
    d.m(2, 2) = kappa;
    d.m(3, 3) = kappa;
    return d;
}

inline DiffusionMatrix diffusion_matrix(const ModelParams& mp) {
    return diffusion_matrix(mp.gamma_m, mp.nbar, mp.kappa);
}

inline Eigen::Vector4cd eigenvalues(const DriftMatrix& a) {
    Eigen::EigenSolver<Matrix4> solver(a.m, /*computeEigenvectors=*/false);
    return solver.eigenvalues();
}

struct StabilityInfo {
    bool stable = false;     // every eigenvalue has Re < 0
    bool marginal = false;   // min |Re lambda| below threshold
    double max_real = 0.0;   // spectral abscissa
    double slowest_rate = 0.0;  // min |Re lambda|
    std::complex<double> rightmost{};
};

/// Spectral stability of A. `marginal_threshold` is absolute, in the same
/// rate unit as A (use 1e-8 * omega_m for the library default).
inline StabilityInfo spectral_stability(const DriftMatrix& a, double marginal_threshold) {
    const Eigen::Vector4cd ev = eigenvalues(a);
    StabilityInfo info;
    info.max_real = -std::numeric_limits<double>::infinity();
    info.slowest_rate = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 4; ++i) {
        if (ev[i].real() > info.max_real) {
            info.max_real = ev[i].real();
            info.rightmost = ev[i];
        }
        info.slowest_rate = std::min(info.slowest_rate, std::abs(ev[i].real()));
    }
    info.stable = info.max_real < 0.0;
    info.marginal = info.slowest_rate < marginal_threshold;
    return info;
}

inline constexpr double marginal_rate_fraction = 1e-8;

/// Closed-form stability condition for a red-detuned cavity:
/// omega_m (kappa^2 + Delta^2) - G^2 Delta > 0. The boundary is not stable.
inline bool is_stable_rh(double detuning, double coupling, double kappa, double omega_m) {
    if (!(detuning > 0.0)) throw ValidationError("detuning", "stability condition only holds for Delta > 0");
    return omega_m * (kappa * kappa + detuning * detuning) - coupling * coupling * detuning > 0.0;
}

/// Mirror spring constant (as a frequency) once the cavity field is
/// eliminated adiabatically: omega_m - G^2 Delta / (kappa^2 + Delta^2).
inline double effective_frequency(double detuning, double coupling, double kappa, double omega_m) {
    return omega_m - coupling * coupling * detuning / (kappa * kappa + detuning * detuning);
}

namespace detail {

constexpr int sym_index(int i, int j) {
    if (i > j) std::swap(i, j);
    // row-major upper triangle of a 4x4 matrix
    constexpr std::array<int, 4> row_start = {0, 4, 7, 9};
    return row_start[i] + (j - i);
}

inline Matrix4 lyapunov_residual(const Matrix4& a, const Matrix4& v, const Matrix4& d) {
    return a * v + v * a.transpose() + d;
}

}  // namespace detail

/**
 * @brief Steady-state covariance: the symmetric V with A V + V A^T + D = 0.
 *
 * Solved directly on the 10 independent entries of V, followed by one step
 * of iterative refinement. Throws NumericalError if A has an eigenvalue with
 * non-negative real part or if the vectorized system is singular.
 */
inline CovarianceMatrix solve_lyapunov(const DriftMatrix& drift, const DiffusionMatrix& diffusion) {
    const Matrix4& a = drift.m;
    const Matrix4& d = diffusion.m;

    const StabilityInfo info = spectral_stability(drift, 0.0);
    if (!info.stable) {
        std::ostringstream msg;
        msg << "drift matrix is not stable: eigenvalue " << info.rightmost.real() << (info.rightmost.imag() < 0 ? "" : "+")
            << info.rightmost.imag() << "i has non-negative real part";
        throw NumericalError(msg.str());
    }

    Eigen::Matrix<double, 10, 10> op = Eigen::Matrix<double, 10, 10>::Zero();
    for (int i = 0; i < 4; ++i) {
        for (int j = i; j < 4; ++j) {
            const int row = detail::sym_index(i, j);
            for (int k = 0; k < 4; ++k) {
                op(row, detail::sym_index(k, j)) += a(i, k);
                op(row, detail::sym_index(i, k)) += a(j, k);
            }
        }
    }

    Eigen::FullPivLU<Eigen::Matrix<double, 10, 10>> lu(op);
    if (!lu.isInvertible() || lu.rcond() < 1e-15) {
        throw NumericalError("Lyapunov system is singular (eigenvalue pair sums to ~0); rcond = " +
                             std::to_string(lu.rcond()));
    }

    auto unpack = [](const Eigen::Matrix<double, 10, 1>& x) {
        Matrix4 v;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) v(i, j) = x[detail::sym_index(i, j)];
        return v;
    };
    auto pack = [](const Matrix4& m) {
        Eigen::Matrix<double, 10, 1> x;
        for (int i = 0; i < 4; ++i)
            for (int j = i; j < 4; ++j) x[detail::sym_index(i, j)] = m(i, j);
        return x;
    };

    Matrix4 v = unpack(lu.solve(-pack(d)));
    const Matrix4 r = detail::lyapunov_residual(a, v, d);
    v -= unpack(lu.solve(pack(0.5 * (r + r.transpose()))));
    return CovarianceMatrix{0.5 * (v + v.transpose())};
}

/// max |A V + V A^T + D|
inline double lyapunov_residual_norm(const DriftMatrix& a, const CovarianceMatrix& v, const DiffusionMatrix& d) {
    return detail::lyapunov_residual(a.m, v.m, d.m).cwiseAbs().maxCoeff();
}

struct IntegrationOptions {
    double tolerance = 1e-10;  // per-entry mixed absolute/relative local error
    double initial_step = 0.0; // 0 picks one from |A|
    long max_steps = 200'000'000;
};

/**
 * @brief Integrates dV/dt = A V + V A^T + D from V0 over [0, t_final].
 *
 * Dormand-Prince 5(4) with embedded error control, symmetrizing V after
 * every accepted step. Throws NumericalError on step-size underflow.
 */
inline CovarianceMatrix integrate_lyapunov(const DriftMatrix& drift, const DiffusionMatrix& diffusion,
                                           const CovarianceMatrix& v0, double t_final,
                                           const IntegrationOptions& opts = {}) {
    if (!(t_final > 0.0) || !std::isfinite(t_final)) throw ValidationError("t_final", "must be finite and > 0");
    const Matrix4& a = drift.m;
    const Matrix4& d = diffusion.m;
    auto rhs = [&](const Matrix4& v) -> Matrix4 { return a * v + v * a.transpose() + d; };

    // Dormand-Prince tableau
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                     a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                     e6 = 22.0 / 525, e7 = -1.0 / 40;
    (void)c2; (void)c3; (void)c4; (void)c5;  // autonomous system

    Matrix4 v = v0.m;
    double t = 0.0;
    const double scale = std::max(a.cwiseAbs().maxCoeff(), 1e-300);
    double h = opts.initial_step > 0.0 ? opts.initial_step : std::min(t_final, 0.01 / scale);
    Matrix4 k1 = rhs(v);
    long steps = 0;

    while (t < t_final) {
        if (++steps > opts.max_steps) throw NumericalError("integrate_lyapunov: step budget exhausted");
        if (t + h > t_final) h = t_final - t;
        if (h <= std::numeric_limits<double>::epsilon() * std::max(1.0, t))
            throw NumericalError("integrate_lyapunov: step size underflow at t = " + std::to_string(t));

        const Matrix4 k2 = rhs(v + h * (a21 * k1));
        const Matrix4 k3 = rhs(v + h * (a31 * k1 + a32 * k2));
        const Matrix4 k4 = rhs(v + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const Matrix4 k5 = rhs(v + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const Matrix4 k6 = rhs(v + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const Matrix4 v_new = v + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const Matrix4 k7 = rhs(v_new);
        const Matrix4 err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        double err_norm = 0.0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                const double sc = opts.tolerance * (1.0 + std::max(std::abs(v(i, j)), std::abs(v_new(i, j))));
                err_norm = std::max(err_norm, std::abs(err(i, j)) / sc);
            }

        if (err_norm <= 1.0) {
            t += h;
            v = 0.5 * (v_new + v_new.transpose());
            k1 = rhs(v);
        }
        const double factor = err_norm > 0.0 ? 0.9 * std::pow(err_norm, -0.2) : 5.0;
        h *= std::clamp(factor, 0.2, 5.0);
    }
    return CovarianceMatrix{v};
}

}  // namespace optomech
