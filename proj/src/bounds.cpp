#include "sepint/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace sepint {

namespace {

long double lpow(long double x, int k) {
    if (k < 0) return 1.0L / lpow(x, -k);
    long double r = 1.0L;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

const long double kSqrt3 = std::sqrt(3.0L);

}  // namespace

KPLoopCheck kp_loop_check(double gamma, double c) {
    if (!(gamma > 0.0) || !(c > 0.0))
        throw std::invalid_argument("kp_loop_check: need gamma > 0 and c > 0");
    KPLoopCheck out;
    out.gamma = gamma;
    out.c = c;
    const long double x = std::exp(static_cast<long double>(c)) / gamma;
    out.tail_valid = 2.0L * x < 1.0L;  // gamma > 2 e^c
    long double lhs = 0.0L;
    for (const auto& [k, nk] : kLoopCountTable) lhs += static_cast<long double>(nk) * lpow(x, k);
    if (out.tail_valid) {
        // All longer loops bounded by n_k <= 2^k, summed from the first
        // length past the exact table.
        const int tail_start = kLoopCountTable.back().first + 2;
        lhs += lpow(2.0L * x, tail_start) / (1.0L - lpow(2.0L * x, 2));
    }
    out.lhs = lhs;
    out.pass = out.tail_valid && lhs <= static_cast<long double>(c);
    return out;
}

KPHighTempCheck kp_ht_check(double z, double a) {
    if (!(std::abs(z) < 1.0) || !(a > 0.0))
        throw std::invalid_argument("kp_ht_check: need |z| < 1 and a > 0");
    KPHighTempCheck out;
    out.z = z;
    out.a = a;
    const long double u = std::abs(static_cast<long double>(z)) *
                          std::exp(5.0L * static_cast<long double>(a));
    out.tail_valid = 5.0L * u < 1.0L;
    long double lhs = 0.0L;
    for (const auto& [k, nk] : kEvenCountTable) lhs += static_cast<long double>(nk) * lpow(u, k);
    if (out.tail_valid) lhs += 0.2L * lpow(5.0L * u, 6) / (1.0L - 5.0L * u);
    out.lhs = lhs;
    out.pass = out.tail_valid && lhs <= static_cast<long double>(a);
    return out;
}

std::optional<double> compression_alpha_threshold(double lambda, double gamma,
                                                  CompressionRegime regime) {
    if (!(lambda > 0.0) || !(gamma > 0.0))
        throw std::invalid_argument("compression_alpha_threshold: need positive lambda, gamma");
    const long double two_plus_sqrt2 = 2.0L + std::sqrt(2.0L);
    if (regime == CompressionRegime::LargeGamma) {
        const long double c = kLoopKpConstant;
        if (!(gamma > std::pow(4.0L, 1.25L))) return std::nullopt;
        const long double denom =
            std::log(static_cast<long double>(lambda) * gamma /
                     (2.0L * two_plus_sqrt2 * std::exp(3.0L * c)));
        if (!(denom > 0.0L)) return std::nullopt;
        const long double num = std::log(std::exp(3.0L * c) * lambda * lpow(gamma, 2));
        return static_cast<double>(num / denom);
    }
    const long double a = kHighTempKpConstant;
    if (!(gamma > 79.0 / 81.0 && gamma < 81.0 / 79.0)) return std::nullopt;
    const long double lg1 = static_cast<long double>(lambda) * (gamma + 1.0L);
    const long double denom = std::log(lg1 / (2.0L * two_plus_sqrt2 * std::exp(3.0L * a)));
    if (!(denom > 0.0L)) return std::nullopt;
    const long double num = std::log(lg1 / (2.0L * std::exp(-3.0L * a) * (79.0L / 81.0L)));
    return static_cast<double>(num / denom);
}

bool separation_condition(double alpha, double beta, double delta, double gamma) {
    if (!(beta > 2.0 * std::sqrt(3.0) * alpha))
        throw std::invalid_argument("separation_condition: need beta > 2 sqrt(3) alpha");
    if (!(delta > 0.0 && delta < 0.5))
        throw std::invalid_argument("separation_condition: need 0 < delta < 1/2");
    if (!(gamma > 0.0)) throw std::invalid_argument("separation_condition: need gamma > 0");
    const long double t = 2.0L * alpha * kSqrt3 / beta;
    const long double log_lhs = t * std::log(3.0L) +
                                ((1.0L + 3.0L * delta) / (4.0L * delta)) * std::log(4.0L) +
                                (t - 1.0L) * std::log(static_cast<long double>(gamma));
    return log_lhs < 0.0L;
}

namespace {

// log of the integration upper bound on gamma at eps, exponent (eps - dp)/11.
long double log_upper(long double eps, long double dp) {
    return (eps - dp) / 11.0L * std::log((1.0L - eps) / eps);
}

}  // namespace

std::optional<EpsWindow> integration_condition(double gamma, double delta) {
    if (!(gamma > 0.0)) throw std::invalid_argument("integration_condition: need gamma > 0");
    if (!(delta > 0.0 && delta < 0.25))
        throw std::invalid_argument("integration_condition: need 0 < delta < 1/4");
    const long double dp = static_cast<long double>(delta) / (1.0L - 2.0L * delta);
    if (!(dp < 0.5L)) return std::nullopt;
    const long double target = std::abs(std::log(static_cast<long double>(gamma)));
    auto feasible = [&](long double eps) {
        return eps > dp && eps < 0.5L && log_upper(eps, dp) > target;
    };

    const long double step = 1e-4L;
    long double lo = -1.0L, hi = -1.0L;
    for (long double eps = dp + step; eps < 0.5L; eps += step) {
        if (!feasible(eps)) continue;
        if (lo < 0.0L) lo = eps;
        hi = eps;
    }
    if (lo < 0.0L) return std::nullopt;

    // Bisection-refine the outer endpoints of the feasible hull.
    long double a = std::max(dp, lo - step), b = lo;
    for (int i = 0; i < 60; ++i) {
        const long double mid = 0.5L * (a + b);
        (feasible(mid) ? b : a) = mid;
    }
    const long double lo_ref = b;
    a = hi;
    b = std::min(0.5L, hi + step);
    for (int i = 0; i < 60; ++i) {
        const long double mid = 0.5L * (a + b);
        (feasible(mid) ? a : b) = mid;
    }
    return EpsWindow{static_cast<double>(lo_ref), static_cast<double>(a)};
}

RegimeReport regime_report(double lambda, double gamma, double delta) {
    RegimeReport r;
    r.lambda = lambda;
    r.gamma = gamma;
    r.delta = delta;
    r.alpha_min_large_gamma =
        compression_alpha_threshold(lambda, gamma, CompressionRegime::LargeGamma);
    r.alpha_min_near_one = compression_alpha_threshold(lambda, gamma, CompressionRegime::NearOne);
    if (delta > 0.0 && delta < 0.25) r.integration_window = integration_condition(gamma, delta);
    return r;
}

EpsOptimum integration_eps_optimum() {
    // Maximize log_upper(eps, 0) on (0, 1/2): dense grid then ternary search.
    const long double step = 1e-4L;
    long double best_eps = step, best = log_upper(step, 0.0L);
    for (long double eps = step; eps < 0.5L; eps += step) {
        const long double v = log_upper(eps, 0.0L);
        if (v > best) {
            best = v;
            best_eps = eps;
        }
    }
    long double a = std::max(1e-9L, best_eps - 2.0L * step);
    long double b = std::min(0.5L - 1e-9L, best_eps + 2.0L * step);
    for (int i = 0; i < 200; ++i) {
        const long double m1 = a + (b - a) / 3.0L;
        const long double m2 = b - (b - a) / 3.0L;
        if (log_upper(m1, 0.0L) < log_upper(m2, 0.0L))
            a = m1;
        else
            b = m2;
    }
    const long double eps = 0.5L * (a + b);
    return EpsOptimum{static_cast<double>(eps), static_cast<double>(std::exp(log_upper(eps, 0.0L)))};
}

}  // namespace sepint
