#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace pairsel {

/// Design matrix (rows = observations, columns = covariates) plus response.
struct DataMatrix {
    Eigen::MatrixXd x;
    Eigen::VectorXd y;
    std::vector<std::string> column_names;  // optional; empty or length p

    Eigen::Index n() const { return x.rows(); }
    Eigen::Index p() const { return x.cols(); }
};

/// Columns centered and scaled to unit variance under the 1/n convention:
/// mean(z_j) = 0 and (1/n) sum z_ij^2 = 1. The response is centered by y_mean.
struct StandardizedDesign {
    Eigen::MatrixXd z;
    Eigen::VectorXd column_means;
    Eigen::VectorXd column_scales;
    double y_mean = 0.0;
    Eigen::VectorXd y_centered;

    Eigen::Index n() const { return z.rows(); }
    Eigen::Index p() const { return z.cols(); }
};

/// Throws std::invalid_argument naming the first zero-variance column.
StandardizedDesign standardize(const DataMatrix& d);

}  // namespace pairsel
