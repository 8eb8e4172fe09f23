#pragma once

#include <Eigen/Dense>

#include "pairsel/data_matrix.hpp"

namespace pairsel {

/// Pearson sample correlation. Throws std::invalid_argument on a
/// zero-variance input (never returns NaN).
double pearson_corr(const Eigen::Ref<const Eigen::VectorXd>& a,
                    const Eigen::Ref<const Eigen::VectorXd>& b);

/// 1-based midranks (ties receive the average of their rank range).
Eigen::VectorXd midranks(const Eigen::Ref<const Eigen::VectorXd>& v);

/// Spearman's rho: Pearson correlation of midrank vectors.
double spearman_rho(const Eigen::Ref<const Eigen::VectorXd>& a,
                    const Eigen::Ref<const Eigen::VectorXd>& b);

/// w_j = |corr(x_j, y)| for every column. A degenerate column is reported
/// with its index in the exception message.
Eigen::VectorXd marginal_correlations(const DataMatrix& d);

/// R^2 of the least-squares fit of y on (1, x_i, x_j), via the closed-form
/// centered 2x2 Gram solve. Throws on a collinear pair (|corr| = 1 within
/// 1e-12) or degenerate column.
double pairwise_r_squared(const DataMatrix& d, Eigen::Index i, Eigen::Index j);

}  // namespace pairsel
