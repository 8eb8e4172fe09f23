#include "pairsel/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pairsel {

namespace {

constexpr double kWeightFloor = 1e-5;
constexpr double kSeparationCutoff = 30.0;

double sigmoid(double eta) {
    if (eta >= 0.0) return 1.0 / (1.0 + std::exp(-eta));
    const double e = std::exp(eta);
    return e / (1.0 + e);
}

// log(1 + e^eta) without overflow
double log1pexp(double eta) {
    if (eta > 0.0) return eta + std::log1p(std::exp(-eta));
    return std::log1p(std::exp(eta));
}

std::vector<int> active_coordinates(const PenaltySpec& spec) {
    std::vector<int> act;
    act.reserve(spec.l1_set.size() + spec.l2_set.size());
    act.insert(act.end(), spec.l1_set.begin(), spec.l1_set.end());
    act.insert(act.end(), spec.l2_set.begin(), spec.l2_set.end());
    std::sort(act.begin(), act.end());
    return act;
}

double penalty_value(const PenaltySpec& spec, const Eigen::VectorXd& beta,
                     double l2_weight) {
    double v = 0.0;
    for (int j : spec.l1_set) v += spec.lambda1 * std::abs(beta[j]);
    for (int j : spec.l2_set) v += l2_weight * beta[j] * beta[j];
    return v;
}

void unstandardize(const Eigen::VectorXd& means, const Eigen::VectorXd& scales,
                   double centered_intercept, FitModel& m) {
    const Eigen::Index p = m.beta.size();
    m.beta_original.resize(p);
    double shift = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
        m.beta_original[j] = m.beta[j] / scales[j];
        shift += m.beta_original[j] * means[j];
    }
    m.intercept = centered_intercept - shift;
    m.active_set.clear();
    for (Eigen::Index j = 0; j < p; ++j)
        if (m.beta[j] != 0.0) m.active_set.push_back(static_cast<int>(j));
}

}  // namespace

void PenaltySpec::validate(Eigen::Index p) const {
    if (lambda1 < 0.0 || lambda2 < 0.0)
        throw std::invalid_argument("PenaltySpec: negative penalty weight");
    std::vector<int> seen(static_cast<std::size_t>(p), 0);
    auto mark = [&](const std::vector<int>& set, const char* name) {
        for (int j : set) {
            if (j < 0 || j >= p)
                throw std::invalid_argument(std::string("PenaltySpec: index out of range in ") + name);
            if (seen[static_cast<std::size_t>(j)]++)
                throw std::invalid_argument("PenaltySpec: sets are not disjoint at index " +
                                            std::to_string(j));
        }
    };
    mark(l1_set, "l1_set");
    mark(l2_set, "l2_set");
    mark(zero_set, "zero_set");
    for (Eigen::Index j = 0; j < p; ++j)
        if (!seen[static_cast<std::size_t>(j)])
            throw std::invalid_argument("PenaltySpec: index " + std::to_string(j) +
                                        " missing from the partition");
}

double soft_threshold(double z, double lambda) {
    if (z > lambda) return z - lambda;
    if (z < -lambda) return z + lambda;
    return 0.0;
}

double linear_objective(const StandardizedDesign& z, const PenaltySpec& spec,
                        const Eigen::VectorXd& beta) {
    const double n = static_cast<double>(z.n());
    const Eigen::VectorXd r = z.y_centered - z.z * beta;
    return r.squaredNorm() / (2.0 * n) + penalty_value(spec, beta, spec.lambda2);
}

FitModel fit_linear(const StandardizedDesign& z, const PenaltySpec& spec,
                    const FitOptions& opts) {
    const Eigen::Index n = z.n();
    const Eigen::Index p = z.p();
    spec.validate(p);

    std::vector<bool> is_l2(static_cast<std::size_t>(p), false);
    for (int j : spec.l2_set) is_l2[static_cast<std::size_t>(j)] = true;
    const std::vector<int> act = active_coordinates(spec);

    FitModel m;
    m.penalty = spec;
    m.family = Family::gaussian;
    m.beta = Eigen::VectorXd::Zero(p);
    if (opts.warm_start) {
        if (opts.warm_start->size() != p)
            throw std::invalid_argument("fit_linear: warm start size mismatch");
        m.beta = *opts.warm_start;
        for (int j : spec.zero_set) m.beta[j] = 0.0;
    }

    Eigen::VectorXd r = z.y_centered - z.z * m.beta;
    const double inv_n = 1.0 / static_cast<double>(n);

    int sweep = 0;
    for (; sweep < opts.max_sweeps; ++sweep) {
        double max_delta = 0.0;
        for (int j : act) {
            const double old = m.beta[j];
            // (1/n) z_j' z_j = 1 by standardization
            const double rho = inv_n * z.z.col(j).dot(r) + old;
            const double next = is_l2[static_cast<std::size_t>(j)]
                                    ? rho / (1.0 + spec.lambda2)
                                    : soft_threshold(rho, spec.lambda1);
            if (next != old) {
                r.noalias() -= z.z.col(j) * (next - old);
                m.beta[j] = next;
                max_delta = std::max(max_delta, std::abs(next - old));
            }
        }
        if (opts.log_objective) {
            m.objective_trace.push_back(r.squaredNorm() * inv_n / 2.0 +
                                        penalty_value(spec, m.beta, spec.lambda2 / 2.0));
        }
        if (max_delta <= opts.tol) {
            m.converged = true;
            ++sweep;
            break;
        }
    }
    m.iterations = sweep;
    m.objective_value =
        r.squaredNorm() * inv_n / 2.0 + penalty_value(spec, m.beta, spec.lambda2);
    unstandardize(z.column_means, z.column_scales, z.y_mean, m);
    return m;
}

double kkt_max_residual(const StandardizedDesign& z, const FitModel& model) {
    const double inv_n = 1.0 / static_cast<double>(z.n());
    const Eigen::VectorXd r = z.y_centered - z.z * model.beta;
    double worst = 0.0;
    for (int j : model.penalty.l1_set) {
        const double g = inv_n * z.z.col(j).dot(r);
        if (model.beta[j] == 0.0)
            worst = std::max(worst, std::abs(g) - model.penalty.lambda1);
        else
            worst = std::max(worst, std::abs(g - model.penalty.lambda1 *
                                                     (model.beta[j] > 0 ? 1.0 : -1.0)));
    }
    for (int j : model.penalty.l2_set) {
        const double g = inv_n * z.z.col(j).dot(r);
        worst = std::max(worst, std::abs(g - model.penalty.lambda2 * model.beta[j]));
    }
    return worst;
}

FitModel fit_logistic(const DataMatrix& d, const PenaltySpec& spec,
                      const FitOptions& opts) {
    const Eigen::Index n = d.n();
    const Eigen::Index p = d.p();
    spec.validate(p);

    long long ones = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (d.y[i] != 0.0 && d.y[i] != 1.0)
            throw std::domain_error("fit_logistic: response must be 0/1");
        ones += d.y[i] == 1.0;
    }
    if (ones == 0 || ones == n)
        throw std::domain_error("fit_logistic: single-class response");

    const StandardizedDesign z = standardize(d);
    std::vector<bool> is_l2(static_cast<std::size_t>(p), false);
    for (int j : spec.l2_set) is_l2[static_cast<std::size_t>(j)] = true;
    const std::vector<int> act = active_coordinates(spec);

    FitModel m;
    m.penalty = spec;
    m.family = Family::binomial;
    m.beta = Eigen::VectorXd::Zero(p);
    if (opts.warm_start) {
        if (opts.warm_start->size() != p)
            throw std::invalid_argument("fit_logistic: warm start size mismatch");
        m.beta = *opts.warm_start;
        for (int j : spec.zero_set) m.beta[j] = 0.0;
    }
    const double ybar = static_cast<double>(ones) / static_cast<double>(n);
    double b0 = std::log(ybar / (1.0 - ybar));

    const double inv_n = 1.0 / static_cast<double>(n);
    auto objective = [&](const Eigen::VectorXd& eta) {
        double nll = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) nll += log1pexp(eta[i]) - d.y[i] * eta[i];
        return nll * inv_n + penalty_value(spec, m.beta, spec.lambda2);
    };

    Eigen::VectorXd eta = Eigen::VectorXd::Constant(n, b0) + z.z * m.beta;
    double prev_obj = objective(eta);
    int irls = 0;
    for (; irls < opts.max_irls; ++irls) {
        bool separated = true;
        for (Eigen::Index i = 0; i < n && separated; ++i)
            separated = std::abs(eta[i]) > kSeparationCutoff;
        if (separated) {
            m.separation_warning = true;
            break;
        }

        Eigen::VectorXd w(n), zw(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double pr = sigmoid(eta[i]);
            w[i] = std::max(pr * (1.0 - pr), kWeightFloor);
            zw[i] = eta[i] + (d.y[i] - pr) / w[i];
        }

        // inner weighted coordinate descent on the quadratic approximation
        Eigen::VectorXd resid = zw - eta;  // zw - b0 - Z beta
        const double wsum = w.sum();
        for (int inner = 0; inner < opts.max_sweeps; ++inner) {
            double max_delta = 0.0;
            {
                const double delta0 = w.dot(resid) / wsum;
                if (delta0 != 0.0) {
                    b0 += delta0;
                    resid.array() -= delta0;
                    max_delta = std::abs(delta0);
                }
            }
            for (int j : act) {
                const double old = m.beta[j];
                const double denom = inv_n * (w.array() * z.z.col(j).array().square()).sum();
                const double num = inv_n * (w.array() * z.z.col(j).array() * resid.array()).sum() +
                                   denom * old;
                const double next = is_l2[static_cast<std::size_t>(j)]
                                        ? num / (denom + spec.lambda2)
                                        : soft_threshold(num, spec.lambda1) / denom;
                if (next != old) {
                    resid.noalias() -= z.z.col(j) * (next - old);
                    m.beta[j] = next;
                    max_delta = std::max(max_delta, std::abs(next - old));
                }
            }
            if (max_delta <= opts.tol) break;
        }

        eta = Eigen::VectorXd::Constant(n, b0) + z.z * m.beta;
        const double obj = objective(eta);
        if (opts.log_objective) m.objective_trace.push_back(obj);
        if (std::abs(prev_obj - obj) <= opts.tol) {
            m.converged = true;
            prev_obj = obj;
            ++irls;
            break;
        }
        prev_obj = obj;
    }
    m.iterations = irls;
    if (m.separation_warning) m.converged = true;  // early stop, flagged
    m.objective_value = prev_obj;
    unstandardize(z.column_means, z.column_scales, b0, m);
    return m;
}

Eigen::VectorXd predict(const FitModel& model, const Eigen::MatrixXd& x_new) {
    if (x_new.cols() != model.beta_original.size())
        throw std::invalid_argument("predict: column count mismatch");
    Eigen::VectorXd eta =
        (x_new * model.beta_original).array() + model.intercept;
    if (model.family == Family::gaussian) return eta;
    for (Eigen::Index i = 0; i < eta.size(); ++i) eta[i] = sigmoid(eta[i]);
    return eta;
}

Eigen::VectorXd predict_labels(const FitModel& model, const Eigen::MatrixXd& x_new) {
    if (model.family != Family::binomial)
        throw std::invalid_argument("predict_labels: binomial models only");
    Eigen::VectorXd pr = predict(model, x_new);
    for (Eigen::Index i = 0; i < pr.size(); ++i) pr[i] = pr[i] >= 0.5 ? 1.0 : 0.0;
    return pr;
}

void to_json(nlohmann::json& j, const PenaltySpec& s) {
    j = nlohmann::json{{"lambda1", s.lambda1},
                       {"lambda2", s.lambda2},
                       {"l1_set", s.l1_set},
                       {"l2_set", s.l2_set},
                       {"zero_set", s.zero_set}};
}

void to_json(nlohmann::json& j, const FitModel& m) {
    j = nlohmann::json{
        {"schema_version", 1},
        {"beta_original", std::vector<double>(m.beta_original.begin(), m.beta_original.end())},
        {"intercept", m.intercept},
        {"active_set", m.active_set},
        {"penalty", m.penalty},
        {"family", m.family == Family::gaussian ? "gaussian" : "binomial"},
        {"objective_value", m.objective_value},
        {"iterations", m.iterations},
        {"converged", m.converged},
        {"separation_warning", m.separation_warning}};
}

}  // namespace pairsel
