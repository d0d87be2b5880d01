#pragma once

#include <array>
#include <optional>
#include <utility>

// Numerical evaluation of the convergence conditions and parameter thresholds:
// the two Kotecky-Preiss summability checks (truncated exact terms plus a
// closed-form geometric tail), the alpha-compression thresholds for both
// parameter regimes, the separation hypothesis inequality, and the
// integration epsilon window. All evaluation is long double (64-bit mantissa
// on x86), with a fixed term order, so pass/fail decisions are reproducible.

namespace sepint {

inline constexpr double kLoopKpConstant = 1e-4;      // c
inline constexpr double kHighTempKpConstant = 1e-5;  // a

// Exact per-edge loop counts n_k entering the loop-polymer check (odd k have
// none by bipartiteness). Cross-checked against count_loops_through_edge.
inline constexpr std::array<std::pair<int, long long>, 6> kLoopCountTable = {{
    {6, 2}, {8, 0}, {10, 10}, {12, 8}, {14, 56}, {16, 96},
}};

// Exact per-edge connected even-set counts n_k for the high-temperature
// check. Cross-checked against count_even_connected_through_edge.
inline constexpr std::array<std::pair<int, long long>, 3> kEvenCountTable = {{
    {3, 2}, {4, 4}, {5, 10},
}};

struct KPLoopCheck {
    double gamma = 0;
    double c = 0;
    long double lhs = 0;     // truncated exact terms + geometric tail
    bool tail_valid = false; // gamma > 2 e^c
    bool pass = false;       // tail_valid && lhs <= c
};

KPLoopCheck kp_loop_check(double gamma, double c);

struct KPHighTempCheck {
    double z = 0;
    double a = 0;
    long double lhs = 0;
    bool tail_valid = false;  // 5 |z| e^{5a} < 1
    bool pass = false;
};

KPHighTempCheck kp_ht_check(double z, double a);

enum class CompressionRegime { LargeGamma, NearOne };

// The guaranteed-compression alpha lower bound for the given regime, or nullopt when the
// regime's precondition fails (gamma range or positive-denominator condition).
std::optional<double> compression_alpha_threshold(double lambda, double gamma,
                                                  CompressionRegime regime);

// The separation hypothesis: 3^{2 a sqrt3 / b} 4^{(1+3d)/(4d)} g^{-1 + 2 a sqrt3 / b} < 1,
// evaluated in log form. Requires beta > 2 sqrt(3) alpha and 0 < delta < 1/2.
bool separation_condition(double alpha, double beta, double delta, double gamma);

struct EpsWindow {
    double lo = 0;
    double hi = 0;
};

// Feasible epsilon interval for the integration condition at (gamma, delta):
// epsilon in (delta/(1-2delta), 1/2) with
// (eps/(1-eps))^{(eps-d')/11} < gamma < ((1-eps)/eps)^{(eps-d')/11}.
// Dense grid scan (1e-4) with bisection-refined endpoints; nullopt if no
// feasible epsilon exists. Requires 0 < delta < 1/4 and gamma > 0.
std::optional<EpsWindow> integration_condition(double gamma, double delta);

struct EpsOptimum {
    double eps = 0;          // argmax of ((1-e)/e)^{e/11} on (0, 1/2)
    double gamma_upper = 0;  // the maximal upper bound on gamma (delta -> 0)
};

EpsOptimum integration_eps_optimum();

// Summary of which guarantees apply at (lambda, gamma): the alpha thresholds
// of both compression regimes and, for the given delta, the feasible epsilon
// window of the integration condition.
struct RegimeReport {
    double lambda = 0;
    double gamma = 0;
    double delta = 0;
    std::optional<double> alpha_min_large_gamma;
    std::optional<double> alpha_min_near_one;
    std::optional<EpsWindow> integration_window;
};

RegimeReport regime_report(double lambda, double gamma, double delta);

}  // namespace sepint
