#include "pairsel/pairwise_stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace pairsel {

namespace {

constexpr double kCollinearTol = 1e-12;

double centered_sq_norm(const Eigen::Ref<const Eigen::VectorXd>& v) {
    const double m = v.mean();
    return (v.array() - m).square().sum();
}

}  // namespace

StandardizedDesign standardize(const DataMatrix& d) {
    const Eigen::Index n = d.n();
    const Eigen::Index p = d.p();
    if (n < 2) throw std::invalid_argument("standardize: need at least 2 rows");

    StandardizedDesign s;
    s.z.resize(n, p);
    s.column_means.resize(p);
    s.column_scales.resize(p);
    for (Eigen::Index j = 0; j < p; ++j) {
        const double m = d.x.col(j).mean();
        // 1/n variance convention so that (1/n) z_j' z_j = 1
        const double var = (d.x.col(j).array() - m).square().sum() / static_cast<double>(n);
        if (!(var > 0.0)) {
            throw std::invalid_argument("standardize: column " + std::to_string(j) +
                                        " has zero variance");
        }
        const double sd = std::sqrt(var);
        s.column_means[j] = m;
        s.column_scales[j] = sd;
        s.z.col(j) = (d.x.col(j).array() - m) / sd;
    }
    s.y_mean = d.y.mean();
    s.y_centered = d.y.array() - s.y_mean;
    return s;
}

double pearson_corr(const Eigen::Ref<const Eigen::VectorXd>& a,
                    const Eigen::Ref<const Eigen::VectorXd>& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("pearson_corr: length mismatch");
    if (a.size() < 2) throw std::invalid_argument("pearson_corr: need n >= 2");
    const double ma = a.mean();
    const double mb = b.mean();
    const Eigen::ArrayXd da = a.array() - ma;
    const Eigen::ArrayXd db = b.array() - mb;
    const double na = da.square().sum();
    const double nb = db.square().sum();
    if (!(na > 0.0) || !(nb > 0.0))
        throw std::invalid_argument("pearson_corr: zero-variance input");
    const double r = (da * db).sum() / std::sqrt(na * nb);
    return std::clamp(r, -1.0, 1.0);
}

Eigen::VectorXd midranks(const Eigen::Ref<const Eigen::VectorXd>& v) {
    const Eigen::Index n = v.size();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::sort(order.begin(), order.end(),
              [&](Eigen::Index i, Eigen::Index j) { return v[i] < v[j]; });

    Eigen::VectorXd ranks(n);
    Eigen::Index i = 0;
    while (i < n) {
        Eigen::Index j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
        // tie block [i, j]; midrank is the average of 1-based positions
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (Eigen::Index k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

double spearman_rho(const Eigen::Ref<const Eigen::VectorXd>& a,
                    const Eigen::Ref<const Eigen::VectorXd>& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("spearman_rho: length mismatch");
    if (a.size() < 2) throw std::invalid_argument("spearman_rho: need n >= 2");
    return pearson_corr(midranks(a), midranks(b));
}

Eigen::VectorXd marginal_correlations(const DataMatrix& d) {
    const Eigen::Index p = d.p();
    Eigen::VectorXd w(p);
    for (Eigen::Index j = 0; j < p; ++j) {
        try {
            w[j] = std::abs(pearson_corr(d.x.col(j), d.y));
        } catch (const std::invalid_argument&) {
            throw std::invalid_argument("marginal_correlations: degenerate column " +
                                        std::to_string(j));
        }
    }
    return w;
}

double pairwise_r_squared(const DataMatrix& d, Eigen::Index i, Eigen::Index j) {
    if (i == j) throw std::invalid_argument("pairwise_r_squared: i == j");
    if (d.n() < 4) throw std::invalid_argument("pairwise_r_squared: need n >= 4");
    if (!(centered_sq_norm(d.x.col(i)) > 0.0) || !(centered_sq_norm(d.x.col(j)) > 0.0))
        throw std::invalid_argument("pairwise_r_squared: degenerate column in pair (" +
                                    std::to_string(i) + "," + std::to_string(j) + ")");
    const double ryi = pearson_corr(d.y, d.x.col(i));
    const double ryj = pearson_corr(d.y, d.x.col(j));
    const double rij = pearson_corr(d.x.col(i), d.x.col(j));
    const double det = 1.0 - rij * rij;
    if (det < kCollinearTol) {
        throw std::invalid_argument("pairwise_r_squared: collinear pair (" +
                                    std::to_string(i) + "," + std::to_string(j) + ")");
    }
    // R^2 of y ~ 1 + x_i + x_j in terms of the pairwise correlations
    const double r2 = (ryi * ryi + ryj * ryj - 2.0 * ryi * ryj * rij) / det;
    return std::clamp(r2, 0.0, 1.0);
}

}  // namespace pairsel
