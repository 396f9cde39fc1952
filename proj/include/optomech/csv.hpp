/**
 * @file csv.hpp
 * @brief CSV emission for sweeps and hysteresis traces.
 *
 * Layout: a first line `# optomech-bistab v<version> <ISO8601 UTC>`, then a
 * header row, then data rows. Comma separated, `.` decimal point, `NA` for
 * quantities that do not exist at a row (e.g. covariance-derived fields of
 * an unstable point). The body is byte-identical for identical inputs.
 */
#pragma once

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "optomech/steady.hpp"
#include "optomech/sweep.hpp"

namespace optomech {

inline constexpr std::string_view version = "0.1.0";
inline constexpr std::string_view na_marker = "NA";

struct CsvTable {
    std::string name;  // file stem
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

inline std::string format_number(double v) {
    if (std::isnan(v)) return std::string(na_marker);
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::string iso8601_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buf;
}

inline std::string header_line(const std::string& timestamp) {
    return "# optomech-bistab v" + std::string(version) + " " + timestamp;
}

inline void write_csv(std::ostream& out, const CsvTable& table, const std::string& timestamp = iso8601_now()) {
    out << header_line(timestamp) << '\n';
    for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << '\n';
    }
}

/// Writes `<dir>/<table.name>.csv` and returns the path.
inline std::filesystem::path write_csv_file(const std::filesystem::path& dir, const CsvTable& table,
                                            const std::string& timestamp = iso8601_now()) {
    std::filesystem::create_directories(dir);
    const auto path = dir / (table.name + ".csv");
    std::ofstream file(path);
    if (!file) throw ValidationError("out", "cannot write '" + path.string() + "'");
    write_csv(file, table, timestamp);
    return path;
}

namespace detail {

inline std::string output_value(const SweepRow& row, Output o, double omega_m) {
    const WorkingPoint& wp = row.analysis.point;
    const auto& rep = row.analysis.report;
    auto fluct = [&](double EntanglementReport::*field) {
        return rep ? format_number((*rep).*field) : std::string(na_marker);
    };
    switch (o) {
        case Output::q_s: return format_number(wp.q_s);
        case Output::photons: return format_number(wp.photons);
        case Output::detuning: return format_number(wp.effective_detuning / omega_m);
        case Output::coupling: return format_number(wp.coupling / omega_m);
        case Output::eta: return format_number(wp.eta);
        case Output::phonons: return fluct(&EntanglementReport::phonons);
        case Output::fluct_photons: return fluct(&EntanglementReport::photons);
        case Output::log_negativity: return fluct(&EntanglementReport::log_negativity);
        case Output::sigma: return fluct(&EntanglementReport::sigma);
        case Output::det_v: return fluct(&EntanglementReport::det_v);
        case Output::nu_min: return fluct(&EntanglementReport::nu_min);
        case Output::validity_ratio: return fluct(&EntanglementReport::validity_ratio);
    }
    return std::string(na_marker);
}

}  // namespace detail

/// Columns: axis values, branch, requested outputs, then stable,
/// validity_ok and status, which are always present.
inline CsvTable sweep_table(const SweepResult& result, std::string name = "sweep") {
    CsvTable t;
    t.name = std::move(name);
    const SweepSpec& spec = result.spec;
    t.columns.emplace_back(axis_column(spec.axis1.axis));
    if (spec.axis2) t.columns.emplace_back(axis_column(spec.axis2->axis));
    t.columns.emplace_back("branch");
    for (Output o : spec.outputs) t.columns.emplace_back(output_column(o));
    t.columns.emplace_back("stable");
    t.columns.emplace_back("validity_ok");
    t.columns.emplace_back("status");

    for (const SweepRow& row : result.rows) {
        std::vector<std::string> cells;
        cells.push_back(format_number(row.x1));
        if (spec.axis2) cells.push_back(format_number(*row.x2));
        cells.emplace_back(row.branch ? std::string(to_string(*row.branch)) : std::string(na_marker));
        for (Output o : spec.outputs) cells.push_back(detail::output_value(row, o, spec.base.omega_m));
        cells.emplace_back(row.analysis.point.dynamically_stable ? "1" : "0");
        cells.emplace_back(row.analysis.report ? (row.analysis.report->validity_ok ? "1" : "0")
                                               : std::string(na_marker));
        cells.emplace_back(to_string(row.analysis.status));
        t.rows.push_back(std::move(cells));
    }
    return t;
}

/// Every real steady state at every power:
/// P_in_W, branch, q_s, photons, Delta_over_wm, G_over_wm, eta, stable.
inline CsvTable hysteresis_roots_table(const HysteresisTrace& trace, const ModelParams& mp,
                                       std::string name = "hysteresis_roots") {
    CsvTable t;
    t.name = std::move(name);
    t.columns = {"P_in_W", "branch", "q_s", "photons", "Delta_over_wm", "G_over_wm", "eta", "stable"};
    for (std::size_t i = 0; i < trace.powers.size(); ++i)
        for (const WorkingPoint& wp : trace.roots[i])
            t.rows.push_back({format_number(trace.powers[i]), std::string(to_string(wp.branch)),
                              format_number(wp.q_s), format_number(wp.photons),
                              format_number(wp.effective_detuning / mp.omega_m), format_number(wp.coupling / mp.omega_m),
                              format_number(wp.eta), wp.dynamically_stable ? "1" : "0"});
    return t;
}

/// Branches selected by the up and down power ramps at each grid power.
inline CsvTable hysteresis_sweeps_table(const HysteresisTrace& trace, std::string name = "hysteresis_sweeps") {
    CsvTable t;
    t.name = std::move(name);
    t.columns = {"P_in_W", "up_branch", "up_photons", "up_eta", "down_branch", "down_photons", "down_eta"};
    for (std::size_t i = 0; i < trace.powers.size(); ++i) {
        const auto& up = trace.up_sweep[i];
        const auto& down = trace.down_sweep[i];
        t.rows.push_back({format_number(trace.powers[i]), std::string(to_string(up.branch)), format_number(up.photons),
                          format_number(up.eta), std::string(to_string(down.branch)), format_number(down.photons),
                          format_number(down.eta)});
    }
    return t;
}

inline CsvTable hysteresis_switch_table(const HysteresisTrace& trace, std::string name = "hysteresis_switch") {
    CsvTable t;
    t.name = std::move(name);
    t.columns = {"switch_down_W", "switch_up_W"};
    t.rows.push_back({trace.switch_down ? format_number(*trace.switch_down) : std::string(na_marker),
                      trace.switch_up ? format_number(*trace.switch_up) : std::string(na_marker)});
    return t;
}

}  // namespace optomech
