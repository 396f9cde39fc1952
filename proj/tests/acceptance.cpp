// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "optomech/optomech.hpp"

using namespace optomech;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

char buf[512];

template <typename... Args>
std::string fmt(const char* f, Args... args) {
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

/// Every covariance matrix produced during the run, for the physicality criterion.
std::vector<CovarianceMatrix> seen;

ModelParams reference_si() { return derive_model(PhysicalParams::reference()); }

ModelParams bare_model(double kappa, double gamma, double nbar) {
    ModelParams mp;
    mp.omega_m = 1.0;
    mp.kappa = kappa;
    mp.gamma_m = gamma;
    mp.nbar = nbar;
    mp.g0 = 1e-4;
    mp.drive_per_sqrt_watt = 1.0;
    return mp;
}

double slowest_rate(const DriftMatrix& a) {
    const auto ev = eigenvalues(a);
    double r = INFINITY;
    for (int i = 0; i < 4; ++i) r = std::min(r, std::abs(ev[i].real()));
    return r;
}

Outcome closed_form_optima() {
    const double d_opt = optimal_entanglement_detuning(1.4, 1.0);
    const double e_max = max_entanglement(0.0, 1.0);
    const bool ok = std::abs(d_opt - 0.85) <= 0.005 && std::abs(e_max - 0.5108) <= 1e-4 &&
                    std::abs(e_max + std::log(3.0 / 5.0)) <= 1e-12;
    return {ok, fmt("Delta_opt(kappa=1.4) = %.6f wm, E_N,max(kappa=0) = %.6f", d_opt, e_max)};
}

Outcome cooling_limit() {
    double worst = 0.0;
    for (double kappa : {0.0, 0.05, 0.3, 0.7, 1.4, 3.0}) {
        const double d = std::sqrt(kappa * kappa + 1.0);
        worst = std::max(worst, std::abs(approx_phonons(d, kappa, 1.0, 1.0) - (d - 1.0) / 2.0));
    }
    const double n = approx_phonons(std::sqrt(1.0025), 0.05, 1.0, 1.0);
    const double rel = std::abs(n / resolved_sideband_phonons(0.05, 1.0) - 1.0);
    return {worst <= 1e-12 && rel <= 2e-3,
            fmt("max |Eq13 - Eq16| = %.2e, kappa=0.05: n_m = %.6e vs kappa^2/4 (rel %.2e)", worst, n, rel)};
}

Outcome oracle_equivalence() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    CovarianceMatrix v0;
    v0.m = 0.5 * Matrix4::Identity();
    int draws = 0;
    double worst = 0.0;
    while (draws < 120) {
        // weak damping, where the Markovian Brownian noise model respects the uncertainty bound
        const double gamma = std::pow(10.0, -3.0 + 1.3 * u(rng));
        const double kappa = 0.3 + 1.7 * u(rng), delta = 0.3 + 1.7 * u(rng);
        const double g = coupling_for_eta(0.2 + 0.75 * u(rng), delta, kappa, 1.0);
        const DriftMatrix a = drift_matrix(1.0, gamma, kappa, delta, g);
        const DiffusionMatrix d = diffusion_matrix(gamma, 5.0 * u(rng), kappa);
        if (!spectral_stability(a, 0.0).stable) continue;
        const CovarianceMatrix direct = solve_lyapunov(a, d);
        const CovarianceMatrix integrated = integrate_lyapunov(a, d, v0, 50.0 / slowest_rate(a));
        worst = std::max(worst, (direct.m - integrated.m).cwiseAbs().maxCoeff());
        seen.push_back(direct);
        seen.push_back(integrated);
        ++draws;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {worst <= 1e-7 && secs < 60.0,
            fmt("%d stable draws, max |V_direct - V_integrated| = %.2e, %.2f s", draws, worst, secs)};
}

Outcome stability_agreement() {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int disagreements = 0, stable = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        const double gamma = std::pow(10.0, -6.0 + 4.0 * u(rng));
        const double kappa = 0.01 + 3.0 * u(rng), delta = 0.01 + 3.0 * u(rng);
        // coupling spread over both sides of the boundary
        const double g = std::sqrt(2.0 * u(rng) * (kappa * kappa + delta * delta) / delta);
        const bool rh = is_stable_rh(delta, g, kappa, 1.0);
        const bool spectral = spectral_stability(drift_matrix(1.0, gamma, kappa, delta, g), 0.0).stable;
        disagreements += rh != spectral;
        stable += rh;
    }
    return {disagreements == 0, fmt("%d draws (%d stable), %d disagreements", n, stable, disagreements)};
}

Outcome approximation_validation() {
    const double eta = 1e-3;
    double worst_sigma = 0.0, worst_det = 0.0, worst_en = 0.0;
    for (double kappa : {0.7, 1.4}) {
        const ModelParams mp = bare_model(kappa, 1e-6, 0.0);
        for (double delta : {0.1, 0.2, 0.3, 0.5, 0.85, 1.0, 1.5, 2.0}) {
            const double g = coupling_for_eta(eta, delta, kappa, 1.0);
            const CovarianceMatrix v = solve_lyapunov(drift_matrix(1.0, mp.gamma_m, kappa, delta, g), diffusion_matrix(mp));
            seen.push_back(v);
            const auto rep = log_negativity(v);
            const auto co = asymptotic_coeffs(delta, kappa, 1.0);
            worst_sigma = std::max(worst_sigma, std::abs(rep.sigma / co.sigma(eta) - 1.0));
            worst_det = std::max(worst_det, std::abs(rep.det_v / co.det_v(eta) - 1.0));
            worst_en = std::max(worst_en, std::abs(rep.log_negativity - co.log_negativity(eta)));
        }
    }
    return {worst_sigma <= 0.02 && worst_det <= 0.02 && worst_en <= 0.05,
            fmt("eta=1e-3, 16 (kappa, Delta) points: max rel err Sigma %.2e, detV %.2e; max |dE_N| %.2e", worst_sigma,
                worst_det, worst_en)};
}

Outcome hysteresis_reproduction() {
    const ModelParams mp = reference_si();
    const auto trace = figure2_trace(mp);
    if (!trace.switch_down || !trace.switch_up) return {false, "no bistable window found"};
    const double lo = *trace.switch_down, hi = *trace.switch_up;
    bool ok = lo < hi;
    int inside = 0, edges = 0, bad_counts = 0, middle_ok = 0, middle_bad = 0;
    for (std::size_t i = 0; i < trace.powers.size(); ++i) {
        const double p = trace.powers[i];
        const bool in = p > lo && p < hi;
        inside += in;
        const bool on_edge = std::abs(p - lo) <= 1e-9 * lo || std::abs(p - hi) <= 1e-9 * hi;
        if (on_edge) {
            // the turning point itself: one simple root plus a double root
            ++edges;
            if (trace.roots[i].size() != 2u) ++bad_counts;
            continue;
        }
        if (trace.roots[i].size() != (in ? 3u : 1u)) ++bad_counts;
        for (const auto& wp : trace.roots[i])
            if (wp.branch == Branch::middle) {
                const bool fails = wp.effective_detuning > 0.0 &&
                                   !is_stable_rh(wp.effective_detuning, wp.coupling, mp.kappa, mp.omega_m) &&
                                   !wp.dynamically_stable;
                fails ? ++middle_ok : ++middle_bad;
            }
    }
    // pinned for the cyclic-frequency reference parameters
    const bool pinned = std::abs(lo / 0.0301775305 - 1.0) < 1e-8 && std::abs(hi / 0.0745536881 - 1.0) < 1e-8;
    ok = ok && inside > 0 && bad_counts == 0 && middle_bad == 0 && middle_ok == inside && pinned;
    return {ok, fmt("window [%.9g, %.9g] W, %d grid powers inside (%d on an edge), %d root-count mismatches, "
                    "%d/%d middle roots unstable",
                    lo, hi, inside, edges, bad_counts, middle_ok, middle_ok + middle_bad)};
}

Outcome three_regimes() {
    const double kappa = fig3_kappa_over_wm;
    int sign_changes = 0;
    double first_positive = NAN;
    double prev = asymptotic_coeffs(0.01, kappa, 1.0).alpha;
    const bool negative_start = prev < 0.0;
    bool third_at_large = true;
    for (double d = 0.01; d <= 2.0 + 1e-12; d += 0.005) {
        const auto co = asymptotic_coeffs(d, kappa, 1.0);
        if ((co.alpha > 0.0) != (prev > 0.0)) {
            ++sign_changes;
            if (std::isnan(first_positive)) first_positive = d;
        }
        prev = co.alpha;
        if (d >= 0.45 && classify_regime(co) != Regime::third) third_at_large = false;
    }
    // full pipeline through the harness: E_N is maximal at the smallest eta for large Delta
    SweepSpec spec = figure3_spec(reference_si(), {.grid = 41, .threads = 4});
    const SweepResult r = sweep(spec);
    std::vector<double> best(spec.axis2->values.size(), -1.0), at_edge(best.size(), -1.0);
    for (const auto& row : r.rows) {
        if (!row.analysis.report) continue;
        seen.push_back(*row.analysis.covariance);
        best[row.index2] = std::max(best[row.index2], row.analysis.report->log_negativity);
        if (row.index1 == 0) at_edge[row.index2] = row.analysis.report->log_negativity;
    }
    bool edge_max = true;
    for (std::size_t j = 0; j < best.size(); ++j)
        if (spec.axis2->values[j] >= 0.45 && at_edge[j] < best[j]) edge_max = false;
    const bool ok = negative_start && sign_changes == 1 && third_at_large && edge_max;
    return {ok, fmt("alpha < 0 at small Delta, %d sign change (at Delta ~ %.3f wm), regime 3 for Delta >= 0.45: %s, "
                    "sweep max at eta->0 for Delta >= 0.45: %s",
                    sign_changes, first_positive, third_at_large ? "yes" : "no", edge_max ? "yes" : "no")};
}

Outcome non_monotonic_witness() {
    SweepSpec spec;
    spec.base = normalize(reference_si());
    spec.base.kappa = fig3_kappa_over_wm;
    const double delta = 0.25;
    const double g_max = coupling_for_eta(1e-3, delta, spec.base.kappa, 1.0);
    spec.axis1 = {Axis::coupling, linspace(0.0, g_max, 200)};
    spec.base_effective_detuning = delta;
    spec.outputs = {Output::coupling, Output::log_negativity};
    const SweepResult r = sweep(spec);
    // scan for a pair G1 < G2 with E_N(G1) > E_N(G2) > 0
    double g1 = NAN, g2 = NAN, e1 = 0.0, e2 = 0.0;
    double best_g = 0.0, best_e = 0.0;
    for (const auto& row : r.rows) {
        if (!row.analysis.report) continue;
        seen.push_back(*row.analysis.covariance);
        const double e = row.analysis.report->log_negativity;
        if (e > best_e) best_e = e, best_g = row.x1;
        if (e > 0.0 && e < best_e && std::isnan(g1)) g1 = best_g, e1 = best_e, g2 = row.x1, e2 = e;
    }
    const bool ok = !std::isnan(g1) && g1 < g2 && e1 > e2 && e2 > 0.0;
    return {ok, fmt("kappa=1.4 wm, T=0.4 K, Delta=0.25 wm: E_N(G=%.4f) = %.5f > E_N(G=%.4f) = %.5f > 0", g1, e1, g2,
                    e2)};
}

Outcome temperature_robustness() {
    const ModelParams mp = reference_si();
    const auto window = bistable_window(mp);
    const SweepResult r = sweep(figure6_spec(mp, {.threads = 4}));
    std::vector<double> start(fig6_temperatures.size(), NAN), end(start.size(), NAN);
    for (const auto& row : r.rows) {
        if (row.branch != Branch::lower || !row.analysis.report) continue;
        seen.push_back(*row.analysis.covariance);
        if (row.analysis.report->log_negativity > 0.0) {
            if (std::isnan(start[row.index2])) start[row.index2] = row.x1;
            end[row.index2] = row.x1;
        }
    }
    bool ok = true;
    std::string detail;
    for (std::size_t t = 0; t < start.size(); ++t) {
        if (std::isnan(start[t])) ok = false;
        if (t > 0 && !(start[t] > start[t - 1] && end[t] - start[t] < end[t - 1] - start[t - 1])) ok = false;
        if (!(end[t] <= window->second) || window->second - end[t] > 1e-6 * window->second) ok = false;
        detail += fmt("%sT=%gK: E_N>0 on [%.4f, %.4f] mW", t ? "; " : "", fig6_temperatures[t], 1e3 * start[t],
                      1e3 * end[t]);
    }
    return {ok, detail + fmt(" (branch end %.4f mW)", 1e3 * window->second)};
}

Outcome physicality() {
    // fig4 sweep adds pipeline states from both branches
    const SweepResult r = sweep(figure4_spec(reference_si(), {.threads = 4}));
    for (const auto& row : r.rows)
        if (row.analysis.covariance) seen.push_back(*row.analysis.covariance);
    std::size_t unphysical = 0;
    double worst_nu = INFINITY;
    for (const auto& v : seen) {
        const double scale = v.m.cwiseAbs().maxCoeff();
        const auto nu = v.symplectic_eigenvalues();
        worst_nu = std::min(worst_nu, nu[0]);
        if (v.asymmetry() > 1e-10 * scale || nu[0] < 0.5 - 1e-9) ++unphysical;
    }
    CovarianceMatrix vac;
    vac.m = 0.5 * Matrix4::Identity();
    const bool vac_ok = log_negativity(vac).log_negativity == 0.0;
    double worst_tmsv = 0.0;
    for (double rr : {0.1, 0.5, 1.0}) {
        CovarianceMatrix v;
        const double ch = std::cosh(2.0 * rr) / 2.0, sh = std::sinh(2.0 * rr) / 2.0;
        v.m.diagonal().setConstant(ch);
        v.m(0, 2) = v.m(2, 0) = sh;
        v.m(1, 3) = v.m(3, 1) = -sh;
        worst_tmsv = std::max(worst_tmsv, std::abs(log_negativity(v).log_negativity - 2.0 * rr));
    }
    return {unphysical == 0 && vac_ok && worst_tmsv <= 1e-9,
            fmt("%zu covariance matrices, %zu unphysical, min nu = %.12f; vacuum E_N = 0: %s; max |E_N - 2r| = %.1e",
                seen.size(), unphysical, worst_nu, vac_ok ? "yes" : "no", worst_tmsv)};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"closed-form optima", closed_form_optima},
        {"cooling limit", cooling_limit},
        {"Lyapunov oracle equivalence", oracle_equivalence},
        {"stability agreement", stability_agreement},
        {"approximation validation", approximation_validation},
        {"hysteresis reproduction", hysteresis_reproduction},
        {"three-regime structure", three_regimes},
        {"non-monotonicity witness", non_monotonic_witness},
        {"temperature robustness", temperature_robustness},
        {"physicality suite", physicality},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.pass;
        std::printf("[%s] %2zu. %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.detail.c_str());
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
