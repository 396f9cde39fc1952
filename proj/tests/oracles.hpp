// Independent reference computations used only by the tests. None of these
// routines share code paths with the library implementation they check.
#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

/// Number of sign changes of f on an evenly spaced grid of `n` points over [lo, hi].
inline int count_sign_changes(const std::function<double(double)>& f, double lo, double hi, std::size_t n) {
    int changes = 0;
    double prev = f(lo);
    for (std::size_t i = 1; i < n; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
        const double cur = f(x);
        if ((prev < 0.0 && cur >= 0.0) || (prev > 0.0 && cur <= 0.0)) ++changes;
        prev = cur;
    }
    return changes;
}

/// Local extrema of f sampled densely: returns the (argmax, argmin) interior
/// turning points of a cubic with one local max followed by one local min.
inline std::pair<double, double> dense_turning_points(const std::function<double(double)>& f, double lo, double hi,
                                                      std::size_t n) {
    double xmax = lo, xmin = lo;
    bool found_max = false;
    double prev2 = f(lo);
    double prev = f(lo + (hi - lo) / static_cast<double>(n - 1));
    for (std::size_t i = 2; i < n; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
        const double cur = f(x);
        const double xprev = lo + (hi - lo) * static_cast<double>(i - 1) / static_cast<double>(n - 1);
        if (!found_max && prev >= prev2 && prev > cur) {
            xmax = xprev;
            found_max = true;
        } else if (found_max && prev <= prev2 && prev < cur) {
            xmin = xprev;
            break;
        }
        prev2 = prev;
        prev = cur;
    }
    return {xmax, xmin};
}

/// Characteristic polynomial coefficients c0..c4 (monic, c4 = 1) of a 4x4
/// matrix by the Faddeev-LeVerrier recursion.
inline std::array<double, 5> characteristic_polynomial(const Eigen::Matrix4d& a) {
    std::array<double, 5> c{};
    c[4] = 1.0;
    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    for (int k = 1; k <= 4; ++k) {
        m = a * m + c[4 - k + 1] * Eigen::Matrix4d::Identity();
        c[4 - k] = -(a * m).trace() / k;
    }
    return c;
}

/// Roots of a monic quartic by Durand-Kerner iteration.
inline std::array<std::complex<double>, 4> quartic_roots(const std::array<double, 5>& c) {
    using cd = std::complex<double>;
    auto p = [&](cd z) { return (((z + c[3]) * z + c[2]) * z + c[1]) * z + c[0]; };
    double radius = 1.0;
    for (int i = 0; i < 4; ++i) radius = std::max(radius, 1.0 + std::abs(c[i]));
    std::array<cd, 4> z;
    const cd seed(0.4, 0.9);
    for (int i = 0; i < 4; ++i) z[i] = std::pow(seed, i) * (0.5 * radius);
    for (int it = 0; it < 2000; ++it) {
        double change = 0.0;
        for (int i = 0; i < 4; ++i) {
            cd denom = 1.0;
            for (int j = 0; j < 4; ++j)
                if (j != i) denom *= (z[i] - z[j]);
            const cd step = p(z[i]) / denom;
            z[i] -= step;
            change = std::max(change, std::abs(step));
        }
        if (change < 1e-15 * radius) break;
    }
    return z;
}

/// Symplectic eigenvalues of a 2n x 2n covariance matrix from the spectrum
/// of i Omega V, sorted ascending (each value listed once).
inline std::vector<double> symplectic_spectrum(const Eigen::MatrixXd& v) {
    const int n = static_cast<int>(v.rows()) / 2;
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (int k = 0; k < n; ++k) {
        omega(2 * k, 2 * k + 1) = 1.0;
        omega(2 * k + 1, 2 * k) = -1.0;
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(std::complex<double>(0.0, 1.0) * (omega * v).cast<std::complex<double>>());
    std::vector<double> all;
    for (int i = 0; i < 2 * n; ++i) all.push_back(std::abs(solver.eigenvalues()[i].real()));
    std::sort(all.begin(), all.end());
    std::vector<double> out;
    for (int i = 0; i < 2 * n; i += 2) out.push_back(0.5 * (all[i] + all[i + 1]));
    return out;
}

/// Partial transpose of the second (optical) mode: p -> -p.
inline Eigen::Matrix4d partial_transpose(const Eigen::Matrix4d& v) {
    const Eigen::Vector4d flip(1.0, 1.0, 1.0, -1.0);
    return flip.asDiagonal() * v * flip.asDiagonal();
}

/// Logarithmic negativity straight from the partially transposed spectrum.
inline double log_negativity_spectral(const Eigen::Matrix4d& v) {
    const auto nu = symplectic_spectrum(partial_transpose(v));
    return std::max(0.0, -std::log(2.0 * nu.front()));
}

/// Golden-section minimization of a unimodal function on [lo, hi].
inline double golden_section_min(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-12) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - invphi * (b - a), d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol * std::max(1.0, std::abs(a) + std::abs(b))) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

/// Steady-state Lyapunov solution through the full 16-dimensional Kronecker
/// system (I (x) A + A (x) I) vec V = -vec D.
inline Eigen::Matrix4d lyapunov_kronecker(const Eigen::Matrix4d& a, const Eigen::Matrix4d& d) {
    Eigen::Matrix<double, 16, 16> op = Eigen::Matrix<double, 16, 16>::Zero();
    const Eigen::Matrix4d id = Eigen::Matrix4d::Identity();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            op.block<4, 4>(4 * i, 4 * j) += id(i, j) * a;
            op.block<4, 4>(4 * i, 4 * j) += a(i, j) * id;
        }
    Eigen::Matrix<double, 16, 1> rhs = -Eigen::Map<const Eigen::Matrix<double, 16, 1>>(d.data());
    Eigen::Matrix<double, 16, 1> x = op.colPivHouseholderQr().solve(rhs);
    return Eigen::Map<Eigen::Matrix4d>(x.data());
}

/// Random 2x2 real symplectic matrix (determinant one).
inline Eigen::Matrix2d random_symplectic(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    std::uniform_real_distribution<double> squeeze(-1.0, 1.0);
    auto rot = [](double t) {
        Eigen::Matrix2d r;
        r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
        return r;
    };
    const double s = std::exp(squeeze(rng));
    Eigen::Matrix2d sq = Eigen::Matrix2d::Zero();
    sq(0, 0) = s;
    sq(1, 1) = 1.0 / s;
    return rot(angle(rng)) * sq * rot(angle(rng));
}

}  // namespace oracle
