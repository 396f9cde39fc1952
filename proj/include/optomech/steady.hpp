/**
 * @file steady.hpp
 * @brief Classical steady states of the driven cavity, branch bookkeeping and
 *        hysteresis under slow power ramps.
 *
 * The steady-state condition omega_m q (kappa^2 + (Delta_0 - G0 q)^2) = G0 E^2
 * is solved in the dimensionless optical-spring shift y = G0 q / omega_m:
 *
 *     y^3 - 2 d y^2 + (k^2 + d^2) y - K = 0,
 *
 * with d = Delta_0/omega_m, k = kappa/omega_m and K = G0^2 E^2 / omega_m^4.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "optomech/dynamics.hpp"
#include "optomech/params.hpp"
#include "optomech/working_point.hpp"

namespace optomech {

/// 1 - G^2 Delta / (omega_m (kappa^2 + Delta^2)); never clamped.
inline double bistability_parameter(double detuning, double coupling, double kappa, double omega_m) {
    return 1.0 - coupling * coupling * detuning / (omega_m * (kappa * kappa + detuning * detuning));
}

/// Coupling that places a point with effective detuning `detuning` at
/// bistability parameter `eta` (inverse of bistability_parameter for G >= 0).
inline double coupling_for_eta(double eta, double detuning, double kappa, double omega_m) {
    if (!(detuning > 0.0)) throw ValidationError("detuning", "must be > 0 to invert the bistability parameter");
    if (!(eta <= 1.0)) throw ValidationError("eta", "must be <= 1 for a real coupling");
    return std::sqrt(omega_m * (kappa * kappa + detuning * detuning) * (1.0 - eta) / detuning);
}

namespace detail {

struct CubicRoots {
    std::vector<double> roots;  // ascending
    /// Index into `roots` of a double root, if the discriminant vanished.
    std::optional<std::size_t> double_root;
};

/// Real roots of y^3 + b y^2 + c y + e = 0 via the depressed cubic, each
/// polished by at most five Newton steps.
inline CubicRoots solve_monic_cubic(double b, double c, double e) {
    const double shift = -b / 3.0;
    const double p = c - b * b / 3.0;
    const double r = 2.0 * b * b * b / 27.0 - b * c / 3.0 + e;
    const double disc = -4.0 * p * p * p - 27.0 * r * r;
    const double disc_scale = 4.0 * std::abs(p * p * p) + 27.0 * r * r;

    auto f = [&](double y) { return ((y + b) * y + c) * y + e; };
    auto df = [&](double y) { return (3.0 * y + 2.0 * b) * y + c; };
    auto polish = [&](double y) {
        for (int it = 0; it < 5; ++it) {
            const double fy = f(y);
            const double slope = df(y);
            if (fy == 0.0 || slope == 0.0) break;
            const double next = y - fy / slope;
            if (!(std::abs(f(next)) < std::abs(fy))) break;
            y = next;
        }
        return y;
    };

    CubicRoots out;
    if (disc_scale == 0.0) {  // triple root
        out.roots = {shift};
        out.double_root = 0;
        return out;
    }
    if (std::abs(disc) <= 1e-12 * disc_scale) {
        const double simple = 3.0 * r / p + shift;
        const double twice = -1.5 * r / p + shift;
        out.roots = {polish(simple), twice};
        if (out.roots[0] > out.roots[1]) std::swap(out.roots[0], out.roots[1]);
        out.double_root = out.roots[0] == twice ? 0 : 1;
        return out;
    }
    if (disc > 0.0) {
        const double m = 2.0 * std::sqrt(-p / 3.0);
        const double arg = std::clamp(3.0 * r / (p * m), -1.0, 1.0);
        const double theta = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k)
            out.roots.push_back(polish(m * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0) + shift));
        std::sort(out.roots.begin(), out.roots.end());
        return out;
    }
    const double s = std::sqrt(r * r / 4.0 + p * p * p / 27.0);
    const double big = -std::copysign(std::cbrt(std::abs(r) / 2.0 + s), r);
    const double t = big + (big != 0.0 ? -p / (3.0 * big) : 0.0);
    out.roots = {polish(t + shift)};
    return out;
}

struct ReducedCubic {
    double d = 0.0;  // Delta_0 / omega_m
    double k = 0.0;  // kappa / omega_m
    double big_k = 0.0;

    double value(double y) const { return y * (k * k + (d - y) * (d - y)) - big_k; }
};

inline ReducedCubic reduce(const ModelParams& mp) {
    ReducedCubic rc;
    rc.d = mp.bare_detuning / mp.omega_m;
    rc.k = mp.kappa / mp.omega_m;
    const double g = mp.g0 / mp.omega_m;
    const double e = mp.drive / mp.omega_m;
    rc.big_k = g * g * e * e;
    return rc;
}

}  // namespace detail

/// Shifts y = G0 q_s / omega_m at the two turning points of the steady-state
/// curve; present only when Delta_0 > sqrt(3) kappa. The lower stable branch
/// ends at `lower_branch_end`, the upper one at `upper_branch_end`.
struct TurningPoints {
    double lower_branch_end = 0.0;
    double upper_branch_end = 0.0;
};

inline std::optional<TurningPoints> turning_points(const ModelParams& mp) {
    const double d = mp.bare_detuning / mp.omega_m;
    const double k = mp.kappa / mp.omega_m;
    // d/dy [y (k^2 + (d - y)^2)] = 3 y^2 - 4 d y + k^2 + d^2
    const double disc = 4.0 * d * d - 3.0 * (k * k + d * d);
    if (!(d > 0.0) || !(disc > 0.0) || mp.g0 <= 0.0) return std::nullopt;
    const double root = std::sqrt(disc);
    return TurningPoints{(2.0 * d - root) / 3.0, (2.0 * d + root) / 3.0};
}

/// Input power (W) whose steady state has optical-spring shift y.
inline double power_for_shift(const ModelParams& mp, double shift) {
    const double d = mp.bare_detuning / mp.omega_m;
    const double k = mp.kappa / mp.omega_m;
    const double big_k = shift * (k * k + (d - shift) * (d - shift));
    const double e = std::sqrt(big_k) * mp.omega_m * mp.omega_m / mp.g0;
    return mp.power_for_drive(e);
}

/// Powers (switch_down, switch_up) bounding the bistable window, from the
/// turning points. switch_up is where the lower branch ceases to exist.
inline std::optional<std::pair<double, double>> bistable_window(const ModelParams& mp) {
    const auto tp = turning_points(mp);
    if (!tp) return std::nullopt;
    return std::pair{power_for_shift(mp, tp->upper_branch_end), power_for_shift(mp, tp->lower_branch_end)};
}

/// Builds the working point whose optical-spring shift is y = G0 q_s / omega_m.
inline WorkingPoint working_point_from_shift(const ModelParams& mp, double shift, Branch branch,
                                             RootStatus status = RootStatus::simple) {
    WorkingPoint wp;
    wp.branch = branch;
    wp.status = status;
    wp.q_s = mp.g0 > 0.0 ? shift * mp.omega_m / mp.g0 : 0.0;
    wp.effective_detuning = mp.bare_detuning - mp.g0 * wp.q_s;
    wp.alpha_s = mp.drive / std::complex<double>(mp.kappa, wp.effective_detuning);
    wp.photons = std::norm(wp.alpha_s);
    wp.coupling = std::numbers::sqrt2 * mp.g0 * std::abs(wp.alpha_s);
    wp.eta = bistability_parameter(wp.effective_detuning, wp.coupling, mp.kappa, mp.omega_m);

    const StabilityInfo info = spectral_stability(drift_matrix(wp, mp), marginal_rate_fraction * mp.omega_m);
    wp.marginal = info.marginal || status == RootStatus::degenerate;
    wp.dynamically_stable = info.stable && status == RootStatus::simple;
    return wp;
}

/// Residual of the steady-state cubic in q_s, relative to its largest coefficient.
inline double steady_residual(const ModelParams& mp, double q_s) {
    const std::array<double, 4> coeff = {mp.omega_m * mp.g0 * mp.g0, -2.0 * mp.omega_m * mp.bare_detuning * mp.g0,
                                         mp.omega_m * (mp.kappa * mp.kappa + mp.bare_detuning * mp.bare_detuning),
                                         -mp.g0 * mp.drive * mp.drive};
    double scale = 0.0;
    for (double c : coeff) scale = std::max(scale, std::abs(c));
    const double value = ((coeff[0] * q_s + coeff[1]) * q_s + coeff[2]) * q_s + coeff[3];
    return scale > 0.0 ? std::abs(value) / scale : std::abs(value);
}

/**
 * @brief All real steady states, sorted by q_s.
 *
 * Three roots are labeled lower/middle/upper. A single root is labeled by
 * the stable branch it continues: upper when it lies beyond the turning
 * point of the upper branch, lower otherwise. A double root on a turning
 * point carries RootStatus::degenerate.
 */
inline std::vector<WorkingPoint> steady_states(const ModelParams& mp) {
    mp.validate();
    if (mp.g0 == 0.0 || mp.drive == 0.0) return {working_point_from_shift(mp, 0.0, Branch::lower)};

    const auto rc = detail::reduce(mp);
    const auto cubic = detail::solve_monic_cubic(-2.0 * rc.d, rc.k * rc.k + rc.d * rc.d, -rc.big_k);
    std::vector<WorkingPoint> out;

    if (cubic.roots.size() == 3) {
        const std::array<Branch, 3> labels = {Branch::lower, Branch::middle, Branch::upper};
        for (std::size_t i = 0; i < 3; ++i) out.push_back(working_point_from_shift(mp, cubic.roots[i], labels[i]));
        return out;
    }
    if (cubic.double_root) {
        const std::size_t dbl = *cubic.double_root;
        if (cubic.roots.size() == 1) {
            out.push_back(working_point_from_shift(mp, cubic.roots[0], Branch::lower, RootStatus::degenerate));
            return out;
        }
        // a double root below the simple one is where the lower branch ends
        for (std::size_t i = 0; i < 2; ++i) {
            const bool is_double = i == dbl;
            const Branch b = (i == 0) ? Branch::lower : Branch::upper;
            out.push_back(working_point_from_shift(mp, cubic.roots[i], b,
                                                   is_double ? RootStatus::degenerate : RootStatus::simple));
        }
        return out;
    }

    Branch label = Branch::lower;
    if (const auto tp = turning_points(mp); tp && cubic.roots[0] > 0.5 * (tp->lower_branch_end + tp->upper_branch_end))
        label = Branch::upper;
    out.push_back(working_point_from_shift(mp, cubic.roots[0], label));
    return out;
}

/// Number of distinct simple real roots at input power `power_w`.
inline int root_count(const ModelParams& mp, double power_w) {
    const auto states = steady_states(mp.with_power(power_w));
    int simple = 0;
    for (const auto& wp : states) simple += wp.status == RootStatus::simple ? 1 : 0;
    return simple;
}

struct HysteresisTrace {
    std::vector<double> powers;
    std::vector<std::vector<WorkingPoint>> roots;
    std::vector<WorkingPoint> up_sweep;    // indexed like `powers`
    std::vector<WorkingPoint> down_sweep;  // indexed like `powers`
    std::optional<double> switch_up;       // lower branch disappears
    std::optional<double> switch_down;     // upper branch disappears
};

namespace detail {

/// Bisection on "three roots" between lo (predicate == inside_at_lo) and hi.
inline double bisect_window_edge(const ModelParams& mp, double lo, double hi, bool inside_at_lo, double rel_tol) {
    for (int it = 0; it < 200 && (hi - lo) > rel_tol * std::max(std::abs(hi), 1e-300); ++it) {
        const double mid = 0.5 * (lo + hi);
        const bool inside = root_count(mp, mid) == 3;
        if (inside == inside_at_lo)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

inline const WorkingPoint* find_branch(const std::vector<WorkingPoint>& roots, Branch b) {
    for (const auto& wp : roots)
        if (wp.branch == b) return &wp;
    return nullptr;
}

}  // namespace detail

/**
 * @brief Steady states over an increasing power grid and the branches
 *        followed by adiabatic up and down ramps.
 *
 * Window edges are refined by bisection on the root count to `rel_tol`.
 */
inline HysteresisTrace hysteresis(const ModelParams& mp, const std::vector<double>& powers, double rel_tol = 1e-10) {
    if (powers.empty()) throw ValidationError("powers", "empty power grid");
    for (std::size_t i = 0; i < powers.size(); ++i) {
        if (!(powers[i] >= 0.0) || !std::isfinite(powers[i])) throw ValidationError("powers", "must be finite and >= 0");
        if (i > 0 && !(powers[i] > powers[i - 1])) throw ValidationError("powers", "must be strictly increasing");
    }

    HysteresisTrace trace;
    trace.powers = powers;
    trace.roots.reserve(powers.size());
    for (double p : powers) trace.roots.push_back(steady_states(mp.with_power(p)));

    auto follow = [&](Branch start, bool ascending) {
        std::vector<WorkingPoint> picked(powers.size());
        Branch current = start;
        for (std::size_t n = 0; n < powers.size(); ++n) {
            const std::size_t i = ascending ? n : powers.size() - 1 - n;
            const WorkingPoint* wp = detail::find_branch(trace.roots[i], current);
            if (!wp) {
                current = current == Branch::lower ? Branch::upper : Branch::lower;
                wp = detail::find_branch(trace.roots[i], current);
            }
            picked[i] = wp ? *wp : trace.roots[i].front();
        }
        return picked;
    };
    trace.up_sweep = follow(Branch::lower, true);
    trace.down_sweep = follow(Branch::upper, false);

    auto three = [&](std::size_t i) {
        int simple = 0;
        for (const auto& wp : trace.roots[i]) simple += wp.status == RootStatus::simple ? 1 : 0;
        return simple == 3;
    };
    for (std::size_t i = 0; i + 1 < powers.size(); ++i) {
        const bool a = three(i), b = three(i + 1);
        if (!a && b && !trace.switch_down)
            trace.switch_down = detail::bisect_window_edge(mp, powers[i], powers[i + 1], false, rel_tol);
        if (a && !b && !trace.switch_up)
            trace.switch_up = detail::bisect_window_edge(mp, powers[i], powers[i + 1], true, rel_tol);
    }
    return trace;
}

}  // namespace optomech
