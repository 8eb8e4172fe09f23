#include "pairsel/extreme_laws.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pairsel {

namespace {

double log_beta(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

void check_np(int n, long long p, int min_n) {
    if (n < min_n)
        throw std::domain_error("extreme_laws: n must be >= " + std::to_string(min_n));
    if (p < 2) throw std::domain_error("extreme_laws: p must be >= 2");
}

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("extreme_laws: alpha must be in (0,1)");
}

}  // namespace

NormalizingConstants normalizing_constants(int n, long long p) {
    check_np(n, p, 3);
    const double m = static_cast<double>(n - 2);
    const double log_pm4 = -4.0 * std::log(static_cast<double>(p)) / m;  // log p^{-4/(n-2)}
    const double log_c = (2.0 / m) * (std::log(m / 2.0) + log_beta(0.5, m / 2.0) +
                                      0.5 * std::log1p(-std::exp(log_pm4)));
    NormalizingConstants k;
    k.n = n;
    k.p = p;
    k.c = std::exp(log_c);
    k.a = 1.0 - std::exp(log_pm4 + log_c);
    k.b = (2.0 / m) * std::exp(log_pm4 + log_c);
    return k;
}

double limiting_cdf_w2(double x, int n) {
    if (n < 3) throw std::domain_error("limiting_cdf_w2: n must be >= 3");
    const double m = static_cast<double>(n - 2);
    if (x > m / 2.0) return 1.0;
    return std::exp(-0.5 * std::pow(1.0 - 2.0 * x / m, m / 2.0));
}

double w2_threshold(double alpha, int n, long long p) {
    check_alpha(alpha);
    check_np(n, p, 3);
    const double m = static_cast<double>(n - 2);
    const double log_pm4 = -4.0 * std::log(static_cast<double>(p)) / m;
    const double log_c = (2.0 / m) * (std::log(m / 2.0) + log_beta(0.5, m / 2.0) +
                                      0.5 * std::log1p(-std::exp(log_pm4)));
    // a + b F_n(alpha) collapses to 1 - p^{-4/(n-2)} c (-2 log(1-alpha))^{2/(n-2)}
    const double log_q = (2.0 / m) * std::log(-2.0 * std::log1p(-alpha));
    return 1.0 - std::exp(log_pm4 + log_c + log_q);
}

double limiting_cdf_spearman(double x) {
    return std::exp(-std::exp(-x / 2.0) / std::sqrt(8.0 * std::numbers::pi));
}

double spearman_threshold(double alpha, int n, long long p) {
    check_alpha(alpha);
    check_np(n, p, 3);
    if (p < 3) throw std::domain_error("spearman_threshold: p must be >= 3");
    const double lp = std::log(static_cast<double>(p));
    const double x_alpha =
        -2.0 * std::log(-std::sqrt(8.0 * std::numbers::pi) * std::log1p(-alpha));
    return (4.0 * lp - std::log(lp) + x_alpha) / static_cast<double>(n - 1);
}

double r_squared_threshold(double delta, int n, long long p) {
    if (!(delta > 0.0)) throw std::domain_error("r_squared_threshold: delta must be > 0");
    if (n < 4) throw std::domain_error("r_squared_threshold: n must be >= 4");
    if (p < 1) throw std::domain_error("r_squared_threshold: p must be >= 1");
    if (p == 1) return 0.0;  // degenerate: no pairs exist
    return -std::expm1(-(4.0 + delta) * std::log(static_cast<double>(p)) /
                       static_cast<double>(n - 3));
}

double phase_transition_cdf(PhaseRegime regime, double x, int n, long long p,
                            double beta, bool as_printed) {
    check_np(n, p, 3);
    switch (regime) {
        case PhaseRegime::sub_exponential:
            return 1.0 - std::exp(-std::exp(x / 2.0) / std::sqrt(8.0 * std::numbers::pi));
        case PhaseRegime::exponential: {
            if (!(beta > 0.0))
                throw std::domain_error("phase_transition_cdf: beta must be in (0,inf)");
            const double k =
                std::sqrt(beta / (2.0 * std::numbers::pi * (1.0 - 4.0 * std::exp(-4.0 * beta))));
            const double lam = k * std::exp((x + 8.0 * beta) / 2.0);
            // as printed the sign inside the outer exponential is positive,
            // which is not a valid CDF; the flag exposes the negated form
            return as_printed ? 1.0 - std::exp(lam) : 1.0 - std::exp(-lam);
        }
        case PhaseRegime::super_exponential:
            return 1.0 - std::exp(-std::exp(x / 2.0) / std::sqrt(2.0 * std::numbers::pi));
    }
    throw std::domain_error("phase_transition_cdf: unknown regime");
}

LawThresholds compute_thresholds(double alpha, double delta, int n, long long p) {
    LawThresholds t;
    t.alpha = alpha;
    t.delta = delta;
    t.n = n;
    t.p = p;
    t.t_star = w2_threshold(alpha, n, p);
    t.s_star = spearman_threshold(alpha, n, p);
    t.s_star_saturated = t.s_star >= 1.0;
    t.r0 = r_squared_threshold(delta, n, p);
    return t;
}

}  // namespace pairsel
