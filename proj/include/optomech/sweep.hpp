/**
 * @file sweep.hpp
 * @brief One- and two-dimensional parameter sweeps through the full
 *        steady state -> covariance -> entanglement pipeline.
 *
 * Axis units: power in W, temperature in K, eta dimensionless, and
 * bare_detuning / effective_detuning / coupling in units of omega_m.
 *
 * Two families of axes exist. Experimental axes (power, bare_detuning)
 * solve the classical steady state and may produce several branches per
 * grid point. Theoretical axes (effective_detuning, eta, coupling) place
 * the linearization directly at (Delta, G), with G obtained from eta by
 * inverting the bistability parameter when eta is swept. Temperature
 * combines with either family.
 */
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "optomech/params.hpp"
#include "optomech/quantum.hpp"
#include "optomech/steady.hpp"

namespace optomech {

enum class Axis { power, bare_detuning, effective_detuning, eta, temperature, coupling };

constexpr std::string_view to_string(Axis a) {
    switch (a) {
        case Axis::power: return "power";
        case Axis::bare_detuning: return "bare_detuning";
        case Axis::effective_detuning: return "effective_detuning";
        case Axis::eta: return "eta";
        case Axis::temperature: return "temperature";
        case Axis::coupling: return "coupling";
    }
    return "?";
}

inline Axis parse_axis(std::string_view name) {
    for (Axis a : {Axis::power, Axis::bare_detuning, Axis::effective_detuning, Axis::eta, Axis::temperature,
                   Axis::coupling})
        if (to_string(a) == name) return a;
    throw ValidationError("axis", "unknown axis '" + std::string(name) + "'");
}

/// CSV column name of an axis value.
constexpr std::string_view axis_column(Axis a) {
    switch (a) {
        case Axis::power: return "P_in_W";
        case Axis::bare_detuning: return "Delta0_over_wm";
        case Axis::effective_detuning: return "axis_Delta_over_wm";
        case Axis::eta: return "axis_eta";
        case Axis::temperature: return "T_K";
        case Axis::coupling: return "axis_G_over_wm";
    }
    return "?";
}

constexpr bool is_theoretical(Axis a) {
    return a == Axis::effective_detuning || a == Axis::eta || a == Axis::coupling;
}
constexpr bool is_experimental(Axis a) { return a == Axis::power || a == Axis::bare_detuning; }

struct AxisGrid {
    Axis axis = Axis::power;
    std::vector<double> values;
};

/// n evenly spaced values from lo to hi inclusive.
inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    for (std::size_t i = 0; i < n; ++i) out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    out.back() = hi;
    return out;
}

enum class BranchSelector { lower, upper, both, all };

inline BranchSelector parse_branch_selector(std::string_view s) {
    if (s == "lower") return BranchSelector::lower;
    if (s == "upper") return BranchSelector::upper;
    if (s == "both") return BranchSelector::both;
    if (s == "all") return BranchSelector::all;
    throw ValidationError("branch", "expected lower|upper|both|all, got '" + std::string(s) + "'");
}

inline bool selects(BranchSelector sel, Branch b) {
    switch (sel) {
        case BranchSelector::lower: return b == Branch::lower;
        case BranchSelector::upper: return b == Branch::upper;
        case BranchSelector::both: return b != Branch::middle;
        case BranchSelector::all: return true;
    }
    return false;
}

enum class Output { q_s, photons, detuning, coupling, eta, phonons, fluct_photons, log_negativity, sigma, det_v, nu_min,
                    validity_ratio };

inline const std::vector<Output>& all_outputs() {
    static const std::vector<Output> outs = {Output::q_s,    Output::photons,       Output::detuning,
                                             Output::coupling, Output::eta,         Output::phonons,
                                             Output::fluct_photons, Output::log_negativity, Output::sigma,
                                             Output::det_v,  Output::nu_min,        Output::validity_ratio};
    return outs;
}

constexpr std::string_view output_column(Output o) {
    switch (o) {
        case Output::q_s: return "q_s";
        case Output::photons: return "photons";
        case Output::detuning: return "Delta_over_wm";
        case Output::coupling: return "G_over_wm";
        case Output::eta: return "eta";
        case Output::phonons: return "n_m";
        case Output::fluct_photons: return "n_o";
        case Output::log_negativity: return "E_N";
        case Output::sigma: return "Sigma";
        case Output::det_v: return "detV";
        case Output::nu_min: return "nu_min";
        case Output::validity_ratio: return "validity_ratio";
    }
    return "?";
}

inline Output parse_output(std::string_view name) {
    for (Output o : all_outputs())
        if (output_column(o) == name) return o;
    throw ValidationError("outputs", "unknown output '" + std::string(name) + "'");
}

struct SweepSpec {
    AxisGrid axis1;
    std::optional<AxisGrid> axis2;
    BranchSelector branches = BranchSelector::both;
    ModelParams base;
    /// Used by theoretical sweeps when the corresponding axis is not swept.
    double base_effective_detuning = 1.0;  // units of omega_m
    double base_eta = 0.5;
    std::vector<Output> outputs = all_outputs();
    double validity_threshold = default_validity_threshold;
    unsigned threads = 1;

    void validate() const {
        base.validate();
        auto check_grid = [](const AxisGrid& g) {
            if (g.values.empty()) throw ValidationError(std::string(to_string(g.axis)), "empty grid");
            const bool ascending = g.values.size() < 2 || g.values[1] > g.values[0];
            for (std::size_t i = 0; i < g.values.size(); ++i) {
                if (!std::isfinite(g.values[i]))
                    throw ValidationError(std::string(to_string(g.axis)), "grid values must be finite");
                if (i > 0 && !(ascending ? g.values[i] > g.values[i - 1] : g.values[i] < g.values[i - 1]))
                    throw ValidationError(std::string(to_string(g.axis)), "grid must be strictly monotone");
            }
            for (double v : g.values) {
                if ((g.axis == Axis::power || g.axis == Axis::temperature || g.axis == Axis::coupling) && v < 0.0)
                    throw ValidationError(std::string(to_string(g.axis)), "values must be >= 0");
                if (g.axis == Axis::effective_detuning && !(v > 0.0))
                    throw ValidationError("effective_detuning", "values must be > 0");
                if (g.axis == Axis::eta && !(v <= 1.0)) throw ValidationError("eta", "values must be <= 1");
            }
        };
        check_grid(axis1);
        if (axis2) {
            check_grid(*axis2);
            if (axis2->axis == axis1.axis) throw ValidationError("axis2", "axis names must be distinct");
            const bool mixed = (is_theoretical(axis1.axis) && is_experimental(axis2->axis)) ||
                               (is_experimental(axis1.axis) && is_theoretical(axis2->axis));
            if (mixed) throw ValidationError("axis2", "cannot mix experimental and theoretical axes");
            const bool both_g = (axis1.axis == Axis::eta && axis2->axis == Axis::coupling) ||
                                (axis1.axis == Axis::coupling && axis2->axis == Axis::eta);
            if (both_g) throw ValidationError("axis2", "eta and coupling both fix G; sweep only one");
        }
        if (theoretical()) {
            if (!(base_effective_detuning > 0.0))
                throw ValidationError("base_effective_detuning", "must be > 0");
            if (!(base_eta <= 1.0)) throw ValidationError("base_eta", "must be <= 1");
        }
        if (!(validity_threshold > 0.0)) throw ValidationError("validity_threshold", "must be > 0");
        if (outputs.empty()) throw ValidationError("outputs", "at least one output is required");
    }

    /// True when the pipeline is driven at (Delta, G) rather than through the
    /// steady-state cubic.
    bool theoretical() const {
        return is_theoretical(axis1.axis) || (axis2 && is_theoretical(axis2->axis));
    }
};

struct SweepRow {
    std::size_t index1 = 0;
    std::size_t index2 = 0;
    double x1 = 0.0;
    std::optional<double> x2;
    /// Empty for theoretical sweeps, which carry no branch.
    std::optional<Branch> branch;
    PointAnalysis analysis;
};

struct SweepResult {
    SweepSpec spec;
    std::vector<SweepRow> rows;
};

namespace detail {

struct GridPoint {
    std::size_t i1 = 0, i2 = 0;
    double x1 = 0.0;
    std::optional<double> x2;
};

inline double value_of(const GridPoint& gp, const SweepSpec& spec, Axis a, double fallback) {
    if (spec.axis1.axis == a) return gp.x1;
    if (spec.axis2 && spec.axis2->axis == a) return *gp.x2;
    return fallback;
}

inline bool swept(const SweepSpec& spec, Axis a) {
    return spec.axis1.axis == a || (spec.axis2 && spec.axis2->axis == a);
}

inline std::vector<SweepRow> evaluate_cell(const SweepSpec& spec, const GridPoint& gp) {
    ModelParams mp = spec.base;
    if (swept(spec, Axis::temperature)) mp = mp.at_temperature(value_of(gp, spec, Axis::temperature, 0.0));

    std::vector<SweepRow> rows;
    auto make_row = [&](const WorkingPoint& wp, std::optional<Branch> branch) {
        SweepRow row;
        row.index1 = gp.i1;
        row.index2 = gp.i2;
        row.x1 = gp.x1;
        row.x2 = gp.x2;
        row.branch = branch;
        row.analysis = analyze_point(wp, mp, spec.validity_threshold);
        rows.push_back(std::move(row));
    };

    if (spec.theoretical()) {
        const double detuning =
            value_of(gp, spec, Axis::effective_detuning, spec.base_effective_detuning) * mp.omega_m;
        double coupling = 0.0;
        if (swept(spec, Axis::coupling))
            coupling = value_of(gp, spec, Axis::coupling, 0.0) * mp.omega_m;
        else
            coupling = coupling_for_eta(value_of(gp, spec, Axis::eta, spec.base_eta), detuning, mp.kappa, mp.omega_m);
        make_row(working_point_from_linearization(mp, detuning, coupling), std::nullopt);
        return rows;
    }

    if (swept(spec, Axis::power)) mp = mp.with_power(value_of(gp, spec, Axis::power, 0.0));
    if (swept(spec, Axis::bare_detuning)) mp.bare_detuning = value_of(gp, spec, Axis::bare_detuning, 0.0) * mp.omega_m;
    for (const WorkingPoint& wp : steady_states(mp))
        if (selects(spec.branches, wp.branch)) make_row(wp, wp.branch);
    return rows;
}

}  // namespace detail

/**
 * @brief Evaluates every grid point of `spec`.
 *
 * Rows are ordered axis2-major, then axis1, then by branch (ascending q_s).
 * Per-point failures are recorded in the row status; only an invalid spec
 * throws. Cells are computed on `spec.threads` workers and assembled in
 * index order, so the result does not depend on the thread count.
 */
inline SweepResult sweep(const SweepSpec& spec) {
    spec.validate();

    std::vector<detail::GridPoint> grid;
    const std::size_t n2 = spec.axis2 ? spec.axis2->values.size() : 1;
    for (std::size_t i2 = 0; i2 < n2; ++i2)
        for (std::size_t i1 = 0; i1 < spec.axis1.values.size(); ++i1) {
            detail::GridPoint gp;
            gp.i1 = i1;
            gp.i2 = i2;
            gp.x1 = spec.axis1.values[i1];
            if (spec.axis2) gp.x2 = spec.axis2->values[i2];
            grid.push_back(gp);
        }

    std::vector<std::vector<SweepRow>> cells(grid.size());
    const unsigned workers = std::max(1u, std::min<unsigned>(spec.threads, static_cast<unsigned>(grid.size())));
    if (workers == 1) {
        for (std::size_t i = 0; i < grid.size(); ++i) cells[i] = detail::evaluate_cell(spec, grid[i]);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < grid.size(); i = next++) cells[i] = detail::evaluate_cell(spec, grid[i]);
            });
        for (auto& t : pool) t.join();
    }

    SweepResult result;
    result.spec = spec;
    for (auto& cell : cells)
        for (auto& row : cell) result.rows.push_back(std::move(row));
    return result;
}

}  // namespace optomech
