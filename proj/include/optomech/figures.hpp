/**
 * @file figures.hpp
 * @brief Canned sweeps for the standard figure set.
 *
 *  fig2   hysteresis of the intracavity photon number versus input power
 *  fig3a  E_N over (eta, Delta) at kappa = 1.4 omega_m
 *  fig3b  G over the same grid
 *  fig4   E_N versus input power on both stable branches
 *  fig5a  eta over (bare detuning, input power)
 *  fig5b  E_N over (bare detuning, input power)
 *  fig6   fig4 repeated at T = 0.4, 5 and 10 K
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "optomech/csv.hpp"
#include "optomech/steady.hpp"
#include "optomech/sweep.hpp"

namespace optomech {

struct FigureOptions {
    std::size_t grid = 0;  // 0 picks the per-figure default
    std::optional<BranchSelector> branches;
    unsigned threads = 1;
    double validity_threshold = default_validity_threshold;
};

inline constexpr std::array<std::string_view, 7> figure_ids = {"fig2", "fig3a", "fig3b", "fig4",
                                                               "fig5a", "fig5b", "fig6"};
inline constexpr std::array<double, 3> fig6_temperatures = {0.4, 5.0, 10.0};
inline constexpr double fig3_kappa_over_wm = 1.4;

/// Upper end of the default power range: 1.5x the power where the lower
/// branch ends, or 2x the configured power when there is no bistability.
inline double default_max_power(const ModelParams& mp) {
    if (const auto window = bistable_window(mp)) return 1.5 * window->second;
    const double configured = mp.power_for_drive(mp.drive);
    return configured > 0.0 ? 2.0 * configured : 1.0;
}

inline constexpr std::size_t branch_end_points = 60;

inline std::vector<double> uniform_power_grid(const ModelParams& mp, std::size_t n) {
    const double hi = default_max_power(mp);
    return linspace(hi / static_cast<double>(n), hi, n);
}

/// n evenly spaced powers up to default_max_power, merged with
/// `branch_end_points` powers approaching each end of the bistable window
/// geometrically (relative distance 1e-1 down to 1e-7). Entanglement lives
/// close to the branch ends, at high temperature within well under one
/// uniform grid cell of them.
inline std::vector<double> default_power_grid(const ModelParams& mp, std::size_t n) {
    std::vector<double> grid = uniform_power_grid(mp, n);
    if (const auto window = bistable_window(mp)) {
        for (double x : linspace(1.0, 7.0, branch_end_points)) {
            grid.push_back(window->second * (1.0 - std::pow(10.0, -x)));
            grid.push_back(window->first * (1.0 + std::pow(10.0, -x)));
        }
        std::sort(grid.begin(), grid.end());
        grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    }
    return grid;
}

inline HysteresisTrace figure2_trace(const ModelParams& mp, const FigureOptions& opts = {}) {
    const std::size_t n = opts.grid ? opts.grid : 400;
    return hysteresis(mp, linspace(0.0, default_max_power(mp), n));
}

inline SweepSpec figure3_spec(const ModelParams& mp, const FigureOptions& opts = {}) {
    const std::size_t n = opts.grid ? opts.grid : 101;
    SweepSpec spec;
    spec.base = mp;
    spec.base.kappa = fig3_kappa_over_wm * mp.omega_m;
    spec.axis1 = {Axis::eta, linspace(1e-3, 1.0, n)};
    spec.axis2 = AxisGrid{Axis::effective_detuning, linspace(0.02, 1.2, n)};
    spec.threads = opts.threads;
    spec.validity_threshold = opts.validity_threshold;
    return spec;
}

inline SweepSpec figure4_spec(const ModelParams& mp, const FigureOptions& opts = {}) {
    const std::size_t n = opts.grid ? opts.grid : 400;
    SweepSpec spec;
    spec.base = mp;
    spec.axis1 = {Axis::power, default_power_grid(mp, n)};
    spec.branches = opts.branches.value_or(BranchSelector::both);
    spec.threads = opts.threads;
    spec.validity_threshold = opts.validity_threshold;
    return spec;
}

inline SweepSpec figure5_spec(const ModelParams& mp, const FigureOptions& opts = {}) {
    const std::size_t n = opts.grid ? opts.grid : 201;
    SweepSpec spec;
    spec.base = mp;
    // the window moves with the bare detuning, so no branch-end refinement here
    spec.axis1 = {Axis::power, uniform_power_grid(mp, n)};
    spec.axis2 = AxisGrid{Axis::bare_detuning, linspace(1.0, 3.5, n)};
    spec.branches = opts.branches.value_or(BranchSelector::lower);
    spec.threads = opts.threads;
    spec.validity_threshold = opts.validity_threshold;
    return spec;
}

inline SweepSpec figure6_spec(const ModelParams& mp, const FigureOptions& opts = {}) {
    SweepSpec spec = figure4_spec(mp, opts);
    spec.axis2 = AxisGrid{Axis::temperature, {fig6_temperatures.begin(), fig6_temperatures.end()}};
    return spec;
}

inline bool is_figure_id(std::string_view id) {
    for (auto f : figure_ids)
        if (f == id) return true;
    return false;
}

/// Every CSV table of one figure panel.
inline std::vector<CsvTable> figure_tables(std::string_view id, const ModelParams& mp, const FigureOptions& opts = {}) {
    auto with_outputs = [](SweepSpec spec, std::vector<Output> outs) {
        spec.outputs = std::move(outs);
        return spec;
    };
    if (id == "fig2") {
        const auto trace = figure2_trace(mp, opts);
        return {hysteresis_roots_table(trace, mp, "fig2_roots"), hysteresis_sweeps_table(trace, "fig2_sweeps"),
                hysteresis_switch_table(trace, "fig2_switch")};
    }
    if (id == "fig3a")
        return {sweep_table(sweep(with_outputs(figure3_spec(mp, opts), {Output::log_negativity, Output::coupling})),
                            "fig3a")};
    if (id == "fig3b") return {sweep_table(sweep(with_outputs(figure3_spec(mp, opts), {Output::coupling})), "fig3b")};
    if (id == "fig4")
        return {sweep_table(sweep(with_outputs(figure4_spec(mp, opts), {Output::log_negativity, Output::coupling,
                                                                          Output::eta, Output::photons,
                                                                          Output::validity_ratio})),
                            "fig4")};
    if (id == "fig5a") return {sweep_table(sweep(with_outputs(figure5_spec(mp, opts), {Output::eta})), "fig5a")};
    if (id == "fig5b")
        return {sweep_table(sweep(with_outputs(figure5_spec(mp, opts), {Output::log_negativity, Output::eta})), "fig5b")};
    if (id == "fig6")
        return {sweep_table(sweep(with_outputs(figure6_spec(mp, opts), {Output::log_negativity, Output::eta,
                                                                          Output::coupling, Output::phonons})),
                            "fig6")};
    throw ValidationError("figure", "unknown figure id '" + std::string(id) + "'");
}

}  // namespace optomech
