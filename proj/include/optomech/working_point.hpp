#pragma once

#include <complex>
#include <string_view>

namespace optomech {

enum class Branch { lower, middle, upper };

constexpr std::string_view to_string(Branch b) {
    switch (b) {
        case Branch::lower: return "lower";
        case Branch::middle: return "middle";
        case Branch::upper: return "upper";
    }
    return "?";
}

/// `degenerate` marks a double root sitting exactly on a turning point.
enum class RootStatus { simple, degenerate };

/// One classical steady state of the driven cavity and its linearization data.
struct WorkingPoint {
    double q_s = 0.0;
    double p_s = 0.0;
    std::complex<double> alpha_s{};
    double photons = 0.0;            // |alpha_s|^2
    double effective_detuning = 0.0; // Delta = Delta_0 - G0 q_s
    double coupling = 0.0;           // G = sqrt(2) G0 |alpha_s|, real gauge
    double eta = 1.0;
    Branch branch = Branch::lower;
    RootStatus status = RootStatus::simple;
    bool dynamically_stable = false;
    /// Slowest decay rate is below the marginal threshold; no covariance is solved.
    bool marginal = false;
};

}  // namespace optomech
