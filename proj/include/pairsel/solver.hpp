#pragma once

#include <optional>
#include <vector>

#include <json.hpp>

#include "pairsel/data_matrix.hpp"

namespace pairsel {

enum class Family { gaussian, binomial };

/// Index partition for the mixed penalty: l1 on C^c intersect M, squared-l2
/// on C intersect M, hard zeros off M. The three sets must partition [0, p).
struct PenaltySpec {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    std::vector<int> l1_set;
    std::vector<int> l2_set;
    std::vector<int> zero_set;

    void validate(Eigen::Index p) const;  // throws std::invalid_argument
};

struct FitOptions {
    double tol = 1e-7;
    int max_sweeps = 10000;
    int max_irls = 100;
    bool log_objective = false;
    std::optional<Eigen::VectorXd> warm_start;  // standardized-scale coefficients
};

struct FitModel {
    Eigen::VectorXd beta;           // standardized scale
    Eigen::VectorXd beta_original;  // raw scale
    double intercept = 0.0;
    std::vector<int> active_set;
    PenaltySpec penalty;
    Family family = Family::gaussian;
    double objective_value = 0.0;
    int iterations = 0;
    bool converged = false;
    bool separation_warning = false;
    // Per-sweep values of the objective the coordinate updates exactly
    // minimize (l2 term weighted lambda2/2; see note at fit_linear).
    std::vector<double> objective_trace;
};

/// sign(z) * max(|z| - lambda, 0).
double soft_threshold(double z, double lambda);

/// Cyclic coordinate descent for
///   (1/2n)||y - Z beta||^2 + lambda1 sum_{l1}|beta_j| + lambda2 sum_{l2} beta_j^2
/// with the ridge coordinate update dividing by (1 + lambda2). That update's
/// stationary point satisfies (1/n) z_j' r = lambda2 beta_j, i.e. per
/// coordinate it exactly minimizes the objective with l2 weight lambda2/2;
/// objective_value still reports the stated objective with full lambda2.
FitModel fit_linear(const StandardizedDesign& z, const PenaltySpec& spec,
                    const FitOptions& opts = {});

/// Penalized logistic regression: outer IRLS with weight floor 1e-5, inner
/// weighted coordinate descent with the same two update families. Minimizes
/// the mean negative log-likelihood plus penalty. The intercept is an
/// unpenalized coordinate.
FitModel fit_logistic(const DataMatrix& d, const PenaltySpec& spec,
                      const FitOptions& opts = {});

/// Response-scale predictions: linear predictor for gaussian, probabilities
/// for binomial.
Eigen::VectorXd predict(const FitModel& model, const Eigen::MatrixXd& x_new);

/// 0/1 labels at probability threshold 0.5 (binomial only).
Eigen::VectorXd predict_labels(const FitModel& model, const Eigen::MatrixXd& x_new);

/// Max KKT violation of a linear fit at the reported solution:
/// l1 coordinates need |(1/n) z_j' r| <= lambda1 (inactive) or
/// (1/n) z_j' r = lambda1 sign(beta_j) (active); l2 coordinates need
/// (1/n) z_j' r = lambda2 beta_j.
double kkt_max_residual(const StandardizedDesign& z, const FitModel& model);

/// The mean penalized objective at beta (standardized scale), l2 term
/// weighted by the full lambda2 as stated.
double linear_objective(const StandardizedDesign& z, const PenaltySpec& spec,
                        const Eigen::VectorXd& beta);

void to_json(nlohmann::json& j, const PenaltySpec& s);
void to_json(nlohmann::json& j, const FitModel& m);

}  // namespace pairsel
