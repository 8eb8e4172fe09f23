#include "pairsel/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

#include "pairsel/rng.hpp"

namespace pairsel {

namespace {

double metric_value(TuneMetric metric, const FitModel& model, const DataMatrix& holdout) {
    const Eigen::VectorXd pred = predict(model, holdout.x);
    const Eigen::Index n = holdout.n();
    switch (metric) {
        case TuneMetric::mse:
            return (holdout.y - pred).squaredNorm() / static_cast<double>(n);
        case TuneMetric::deviance: {
            double dev = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                const double pr = std::clamp(pred[i], 1e-12, 1.0 - 1e-12);
                dev += holdout.y[i] == 1.0 ? -2.0 * std::log(pr) : -2.0 * std::log1p(-pr);
            }
            return dev / static_cast<double>(n);
        }
        case TuneMetric::classification_error: {
            double err = 0.0;
            for (Eigen::Index i = 0; i < n; ++i)
                err += (pred[i] >= 0.5 ? 1.0 : 0.0) != holdout.y[i];
            return err / static_cast<double>(n);
        }
    }
    throw std::logic_error("metric_value: unknown metric");
}

DataMatrix subset_rows(const DataMatrix& d, const std::vector<int>& rows) {
    DataMatrix out;
    out.x.resize(static_cast<Eigen::Index>(rows.size()), d.p());
    out.y.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.x.row(static_cast<Eigen::Index>(i)) = d.x.row(rows[i]);
        out.y[static_cast<Eigen::Index>(i)] = d.y[rows[i]];
    }
    out.column_names = d.column_names;
    return out;
}

}  // namespace

PenaltySpec penalty_partition(const ScreenSets& sets, Eigen::Index p,
                              double lambda1, double lambda2) {
    PenaltySpec spec;
    spec.lambda1 = lambda1;
    spec.lambda2 = lambda2;
    const std::set<int> in_c(sets.c.begin(), sets.c.end());
    const std::set<int> in_m(sets.m.begin(), sets.m.end());
    for (int j : sets.m) {
        (in_c.count(j) ? spec.l2_set : spec.l1_set).push_back(j);
    }
    for (Eigen::Index j = 0; j < p; ++j)
        if (!in_m.count(static_cast<int>(j))) spec.zero_set.push_back(static_cast<int>(j));
    std::sort(spec.l1_set.begin(), spec.l1_set.end());
    std::sort(spec.l2_set.begin(), spec.l2_set.end());
    return spec;
}

double lambda1_max(const StandardizedDesign& z, const std::vector<int>& l1_set) {
    double m = 0.0;
    const double inv_n = 1.0 / static_cast<double>(z.n());
    for (int j : l1_set)
        m = std::max(m, std::abs(inv_n * z.z.col(j).dot(z.y_centered)));
    return m;
}

std::vector<double> default_lambda1_grid(const StandardizedDesign& z,
                                         const std::vector<int>& l1_set) {
    if (l1_set.empty()) return {0.0};
    const double top = lambda1_max(z, l1_set);
    if (top <= 0.0) return {0.0};
    std::vector<double> grid;
    const int count = 50;
    for (int i = 0; i < count; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(count - 1);
        grid.push_back(top * std::pow(1e-3, t));
    }
    return grid;  // descending
}

std::vector<double> default_lambda2_grid(const std::vector<int>& l2_set) {
    if (l2_set.empty()) return {0.0};
    return {0.01, 0.1, 1.0, 10.0};
}

std::string score_table_csv(const std::vector<ScoreRow>& table) {
    std::string out = "lambda1,lambda2,fold,metric_value\n";
    char buf[128];
    for (const auto& row : table) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%d,%.17g\n", row.lambda1,
                      row.lambda2, row.fold, row.value);
        out += buf;
    }
    return out;
}

TuneResult tune(const DataMatrix& train, const ScreenSets& sets,
                const TuningPlan& plan, const DataMatrix* validation,
                Family family, const FitOptions& fit_opts) {
    const Eigen::Index p = train.p();
    if (plan.strategy == TuningPlan::Strategy::validation_set && validation == nullptr)
        throw std::invalid_argument("tune: validation data required for validation_set strategy");
    if (plan.strategy == TuningPlan::Strategy::kfold &&
        (plan.k < 2 || plan.k > train.n()))
        throw std::invalid_argument("tune: kfold requires 2 <= k <= n");

    const StandardizedDesign z_full = standardize(train);
    const PenaltySpec base = penalty_partition(sets, p);

    std::vector<double> l1_grid = plan.lambda1_grid.empty()
                                      ? default_lambda1_grid(z_full, base.l1_set)
                                      : plan.lambda1_grid;
    std::vector<double> l2_grid =
        plan.lambda2_grid.empty() ? default_lambda2_grid(base.l2_set) : plan.lambda2_grid;
    std::sort(l1_grid.rbegin(), l1_grid.rend());

    struct TrainFold {
        DataMatrix train_data;
        DataMatrix holdout;
        StandardizedDesign z;  // gaussian only
        int fold;
    };
    std::vector<TrainFold> folds;
    if (plan.strategy == TuningPlan::Strategy::validation_set) {
        TrainFold f;
        f.train_data = train;
        f.holdout = *validation;
        if (family == Family::gaussian) f.z = z_full;
        f.fold = -1;
        folds.push_back(std::move(f));
    } else {
        std::vector<int> order(static_cast<std::size_t>(train.n()));
        std::iota(order.begin(), order.end(), 0);
        Rng rng(plan.seed);
        rng.shuffle(order);
        for (int f = 0; f < plan.k; ++f) {
            std::vector<int> in_rows, out_rows;
            for (std::size_t i = 0; i < order.size(); ++i)
                (static_cast<int>(i) % plan.k == f ? out_rows : in_rows).push_back(order[i]);
            std::sort(in_rows.begin(), in_rows.end());
            std::sort(out_rows.begin(), out_rows.end());
            TrainFold tf;
            tf.train_data = subset_rows(train, in_rows);
            tf.holdout = subset_rows(train, out_rows);
            if (family == Family::gaussian) tf.z = standardize(tf.train_data);
            tf.fold = f;
            folds.push_back(std::move(tf));
        }
    }

    // scores keyed by grid coordinates; accumulate fold means afterwards
    const std::size_t cells = l1_grid.size() * l2_grid.size();
    std::vector<double> sum(cells, 0.0);
    std::vector<int> count(cells, 0);
    std::vector<ScoreRow> table;
    bool any_converged = false;

    for (const auto& fold : folds) {
        for (std::size_t b = 0; b < l2_grid.size(); ++b) {
            FitOptions opts = fit_opts;
            opts.warm_start.reset();
            for (std::size_t a = 0; a < l1_grid.size(); ++a) {
                PenaltySpec spec = base;
                spec.lambda1 = l1_grid[a];
                spec.lambda2 = l2_grid[b];
                double value = std::numeric_limits<double>::infinity();
                try {
                    const FitModel fit = family == Family::gaussian
                                             ? fit_linear(fold.z, spec, opts)
                                             : fit_logistic(fold.train_data, spec, opts);
                    opts.warm_start = fit.beta;
                    if (fit.converged) {
                        any_converged = true;
                        value = metric_value(plan.metric, fit, fold.holdout);
                    }
                } catch (const std::exception&) {
                    // degenerate fold fit; scored as +inf
                }
                const std::size_t cell = a * l2_grid.size() + b;
                sum[cell] += value;
                ++count[cell];
                table.push_back({l1_grid[a], l2_grid[b], fold.fold, value});
            }
        }
    }
    if (!any_converged)
        throw std::runtime_error("tune: no grid fit converged\n" + score_table_csv(table));

    // winner: minimal mean score; ties toward larger lambda1 then larger lambda2
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_a = 0, best_b = 0;
    for (std::size_t a = 0; a < l1_grid.size(); ++a) {
        for (std::size_t b = 0; b < l2_grid.size(); ++b) {
            const std::size_t cell = a * l2_grid.size() + b;
            const double mean = sum[cell] / static_cast<double>(count[cell]);
            const bool better =
                mean < best ||
                (mean == best && (l1_grid[a] > l1_grid[best_a] ||
                                  (l1_grid[a] == l1_grid[best_a] &&
                                   l2_grid[b] > l2_grid[best_b])));
            if (better) {
                best = mean;
                best_a = a;
                best_b = b;
            }
        }
    }

    TuneResult result;
    result.lambda1 = l1_grid[best_a];
    result.lambda2 = l2_grid[best_b];
    result.table = std::move(table);
    PenaltySpec spec = base;
    spec.lambda1 = result.lambda1;
    spec.lambda2 = result.lambda2;
    result.model = family == Family::gaussian ? fit_linear(z_full, spec, fit_opts)
                                              : fit_logistic(train, spec, fit_opts);
    return result;
}

}  // namespace pairsel
