#pragma once

namespace pairsel {

/// Normalizing constants for the limiting law of the squared coherence
/// W^2 = max_{i<j} corr(x_i, x_j)^2 of an n x p null Gaussian design:
///   a = 1 - p^{-4/(n-2)} c,   b = (2/(n-2)) p^{-4/(n-2)} c,
///   c = ((n-2)/2 * B(1/2,(n-2)/2) * sqrt(1 - p^{-4/(n-2)}))^{2/(n-2)}.
struct NormalizingConstants {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    int n = 0;
    long long p = 0;
};

/// Screening thresholds for a given (alpha, delta, n, p): t_star on squared
/// Pearson correlation, s_star on squared Spearman rho, r0 on pairwise R^2.
struct LawThresholds {
    double alpha = 0.0;
    double delta = 0.0;
    int n = 0;
    long long p = 0;
    double t_star = 0.0;
    double s_star = 0.0;
    bool s_star_saturated = false;  // s_star >= 1: Spearman screen admits no pair
    double r0 = 0.0;
};

enum class PhaseRegime { sub_exponential, exponential, super_exponential };

/// Evaluated in log space; valid for p up to ~1e9 and large n.
NormalizingConstants normalizing_constants(int n, long long p);

/// Limiting CDF of (W^2 - a)/b: exp{-(1/2)(1 - 2x/(n-2))^{(n-2)/2}} for
/// x <= (n-2)/2, and 1 beyond the boundary.
double limiting_cdf_w2(double x, int n);

/// 100(1-alpha)% quantile of the W^2 law on the squared-correlation scale:
/// t_star = 1 - p^{-4/(n-2)} c (-2 log(1-alpha))^{2/(n-2)}.
double w2_threshold(double alpha, int n, long long p);

/// Limiting CDF of (n-1)S^2 - 4 log p + log log p for the maximal squared
/// Spearman rho: exp{-(8 pi)^{-1/2} exp(-x/2)}.
double limiting_cdf_spearman(double x);

/// s_star = (4 log p - log log p + x_alpha)/(n-1) with
/// x_alpha = -2 log(-sqrt(8 pi) log(1-alpha)). May be >= 1 at small (n,p);
/// callers should treat that as a saturated screen (see LawThresholds).
double spearman_threshold(double alpha, int n, long long p);

/// r0 = 1 - p^{-(4+delta)/(n-3)}.
double r_squared_threshold(double delta, int n, long long p);

/// Limiting CDFs of the normalized coherence statistic in the three
/// growth regimes of log p versus n. The exponential-case formula is
/// implemented exactly as printed in its source when as_printed is true;
/// that form is not a valid CDF (decreasing, exceeds 1) and is flagged by
/// the Monte Carlo validator rather than silently corrected.
double phase_transition_cdf(PhaseRegime regime, double x, int n, long long p,
                            double beta = 0.0, bool as_printed = true);

/// All three thresholds for one screening configuration. Requires n >= 4
/// (r0 needs it); use the individual functions for smaller n.
LawThresholds compute_thresholds(double alpha, double delta, int n, long long p);

}  // namespace pairsel
