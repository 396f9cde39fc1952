// Solve the reference cavity at a power inside the bistable window and print
// cooling and entanglement on each stable branch.

#include <cstdio>

#include "optomech/optomech.hpp"

int main() {
    using namespace optomech;

    const ModelParams mp = normalize(derive_model(PhysicalParams::reference()));
    const auto window = bistable_window(mp);
    if (!window) {
        std::puts("no bistability for these parameters");
        return 0;
    }
    const double power = 0.5 * (window->first + window->second);
    std::printf("bistable between %.4g W and %.4g W; solving at %.4g W\n", window->first, window->second, power);

    for (const WorkingPoint& wp : steady_states(mp.with_power(power))) {
        const PointAnalysis pa = analyze_point(wp, mp);
        std::printf("%-6s Delta/wm=%8.4f  G/wm=%7.4f  eta=%8.4f  ", std::string(to_string(wp.branch)).c_str(),
                    wp.effective_detuning, wp.coupling, wp.eta);
        if (pa.report)
            std::printf("n_m=%9.4f  E_N=%.4f\n", pa.report->phonons, pa.report->log_negativity);
        else
            std::printf("%s\n", std::string(to_string(pa.status)).c_str());
    }
    return 0;
}
