// Command line front end: steady states, sweeps, figure data and closed-form optima.
//
// Exit codes: 0 success, 2 invalid input, 3 numerical failure.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "optomech/optomech.hpp"

namespace {

constexpr int exit_validation = 2;
constexpr int exit_numerical = 3;

struct GlobalOptions {
    std::string config;
    std::string out;
    std::size_t grid = 0;
    std::string branch;
    unsigned threads = 1;
    double validity_threshold = optomech::default_validity_threshold;
};

optomech::ModelParams load_model(const GlobalOptions& g) {
    const optomech::PhysicalParams p =
        g.config.empty() ? optomech::parse_config(optomech::reference_config_text) : optomech::load_config(g.config);
    return optomech::derive_model(p);
}

void emit(const GlobalOptions& g, const std::vector<optomech::CsvTable>& tables) {
    const std::string stamp = optomech::iso8601_now();
    for (const auto& t : tables) {
        if (g.out.empty())
            optomech::write_csv(std::cout, t, stamp);
        else
            std::cout << optomech::write_csv_file(g.out, t, stamp).string() << '\n';
    }
}

/// "name:min:max:n" (evenly spaced) or "name:v1,v2,..." (explicit values).
optomech::AxisGrid parse_axis_spec(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    if (parts.size() != 2 && parts.size() != 4)
        throw optomech::ValidationError("axis", "expected name:min:max:n or name:v1,v2,... got '" + text + "'");

    optomech::AxisGrid grid;
    grid.axis = optomech::parse_axis(parts[0]);
    auto number = [&](const std::string& s) { return optomech::detail::parse_number(s, parts[0]); };
    if (parts.size() == 4) {
        const double n = number(parts[3]);
        if (!(n >= 1.0) || n != std::floor(n)) throw optomech::ValidationError(parts[0], "point count must be >= 1");
        grid.values = optomech::linspace(number(parts[1]), number(parts[2]), static_cast<std::size_t>(n));
    } else {
        std::stringstream vs(parts[1]);
        for (std::string item; std::getline(vs, item, ',');) grid.values.push_back(number(item));
    }
    return grid;
}

std::vector<optomech::Output> parse_outputs(const std::string& list) {
    if (list.empty()) return optomech::all_outputs();
    std::vector<optomech::Output> outs;
    std::stringstream ss(list);
    for (std::string item; std::getline(ss, item, ',');) outs.push_back(optomech::parse_output(item));
    return outs;
}

void print_optima(const optomech::ModelParams& mp) {
    const double k = mp.kappa / mp.omega_m;
    const double cool = optomech::optimal_cooling_detuning(k, 1.0);
    const double ent = optomech::optimal_entanglement_detuning(k, 1.0);
    std::printf("kappa_over_wm = %.10g\n", k);
    std::printf("cooling_detuning_over_wm = %.10g\n", cool);
    std::printf("min_phonons = %.10g\n", optomech::minimal_phonons(k, 1.0));
    std::printf("resolved_sideband_phonons = %.10g\n", optomech::resolved_sideband_phonons(k, 1.0));
    std::printf("entanglement_detuning_over_wm = %.10g\n", ent);
    std::printf("max_log_negativity = %.10g\n", optomech::max_entanglement(k, 1.0));
    std::printf("nbar = %.10g\n", mp.nbar);
    if (const auto window = optomech::bistable_window(mp))
        std::printf("bistable_window_W = %.10g %.10g\n", window->first, window->second);
    else
        std::printf("bistable_window_W = NA\n");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Steady states, Gaussian fluctuations and entanglement of a bistable optomechanical cavity"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    app.add_option("--config", g.config, "Parameter file (key = value); defaults to the reference set");
    app.add_option("--out", g.out, "Directory for CSV files; stdout when omitted");
    app.add_option("--grid", g.grid, "Grid resolution for figure commands");
    app.add_option("--branch", g.branch, "Branch selection: lower|upper|both|all");
    app.add_option("--threads", g.threads, "Worker threads for sweeps")->check(CLI::PositiveNumber);
    app.add_option("--validity-threshold", g.validity_threshold, "Maximum n_o / |alpha_s|^2 for valid rows");

    auto* steady_cmd = app.add_subcommand("steady", "All steady states at the configured (or given) power");
    std::optional<double> power;
    steady_cmd->add_option("--power", power, "Input power in W");

    auto* sweep_cmd = app.add_subcommand("sweep", "Parameter sweep through the full pipeline");
    std::string axis1, axis2, outputs;
    double base_eta = 0.5, base_delta = 1.0;
    sweep_cmd->add_option("--axis1", axis1, "name:min:max:n or name:v1,v2,...")->required();
    sweep_cmd->add_option("--axis2", axis2, "Optional second axis, same syntax");
    sweep_cmd->add_option("--eta", base_eta, "Bistability parameter when eta is not swept (theoretical axes)");
    sweep_cmd->add_option("--delta", base_delta, "Effective detuning / omega_m when not swept (theoretical axes)");
    sweep_cmd->add_option("--outputs", outputs, "Comma separated output columns (default: all)");

    auto* figure_cmd = app.add_subcommand("figure", "Data for one figure panel");
    std::string figure_id;
    figure_cmd->add_option("id", figure_id, "fig2|fig3a|fig3b|fig4|fig5a|fig5b|fig6")->required();

    auto* optima_cmd = app.add_subcommand("optima", "Closed-form optimal detunings, phonon number and E_N");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_validation;
    }

    try {
        const optomech::ModelParams mp = load_model(g);
        if (g.validity_threshold <= 0.0) throw optomech::ValidationError("validity-threshold", "must be > 0");
        std::optional<optomech::BranchSelector> branches;
        if (!g.branch.empty()) branches = optomech::parse_branch_selector(g.branch);

        if (steady_cmd->parsed()) {
            if (power && !(*power >= 0.0)) throw optomech::ValidationError("power", "must be >= 0");
            const optomech::ModelParams at = power ? mp.with_power(*power) : mp;
            const double p = at.power_for_drive(at.drive);
            optomech::HysteresisTrace single = optomech::hysteresis(at, {p});
            emit(g, {optomech::hysteresis_roots_table(single, at, "steady")});
        } else if (sweep_cmd->parsed()) {
            optomech::SweepSpec spec;
            spec.base = mp;
            spec.axis1 = parse_axis_spec(axis1);
            if (!axis2.empty()) spec.axis2 = parse_axis_spec(axis2);
            spec.branches = branches.value_or(optomech::BranchSelector::both);
            spec.base_eta = base_eta;
            spec.base_effective_detuning = base_delta;
            spec.outputs = parse_outputs(outputs);
            spec.validity_threshold = g.validity_threshold;
            spec.threads = g.threads;
            emit(g, {optomech::sweep_table(optomech::sweep(spec))});
        } else if (figure_cmd->parsed()) {
            if (!optomech::is_figure_id(figure_id))
                throw optomech::ValidationError("figure", "unknown figure id '" + figure_id + "'");
            optomech::FigureOptions opts;
            opts.grid = g.grid;
            opts.branches = branches;
            opts.threads = g.threads;
            opts.validity_threshold = g.validity_threshold;
            emit(g, optomech::figure_tables(figure_id, mp, opts));
        } else if (optima_cmd->parsed()) {
            print_optima(mp);
        }
    } catch (const optomech::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_validation;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_validation;
    } catch (const optomech::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return exit_numerical;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return exit_numerical;
    }
    return 0;
}
