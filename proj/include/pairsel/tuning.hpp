#pragma once

#include <cstdint>
#include <vector>

#include "pairsel/data_matrix.hpp"
#include "pairsel/screening.hpp"
#include "pairsel/solver.hpp"

namespace pairsel {

enum class TuneMetric { mse, deviance, classification_error };

struct TuningPlan {
    enum class Strategy { validation_set, kfold };
    Strategy strategy = Strategy::validation_set;
    int k = 5;
    std::vector<double> lambda1_grid;  // descending; empty = default grid
    std::vector<double> lambda2_grid;  // empty = default grid
    TuneMetric metric = TuneMetric::mse;
    std::uint64_t seed = 0;  // fold assignment
};

struct ScoreRow {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    int fold = 0;  // -1 for validation-set scoring
    double value = 0.0;
};

struct TuneResult {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    FitModel model;  // refit on the full training data at the winner
    std::vector<ScoreRow> table;
};

/// Penalty partition implied by the screening result: l2 on c, l1 on m\c,
/// zeros elsewhere.
PenaltySpec penalty_partition(const ScreenSets& sets, Eigen::Index p,
                              double lambda1 = 0.0, double lambda2 = 0.0);

/// Smallest lambda1 that zeroes the whole l1 block (empty block: 0).
double lambda1_max(const StandardizedDesign& z, const std::vector<int>& l1_set);

/// 50 log-spaced values from lambda1_max down to 1e-3 * lambda1_max,
/// descending; {0} when the l1 block is empty.
std::vector<double> default_lambda1_grid(const StandardizedDesign& z,
                                         const std::vector<int>& l1_set);

/// {0.01, 0.1, 1, 10}; {0} when the l2 block is empty.
std::vector<double> default_lambda2_grid(const std::vector<int>& l2_set);

/// Exhaustive grid evaluation with warm starts along the lambda1 path.
/// Ties break toward larger lambda1, then larger lambda2. Screening is
/// fixed before tuning and not re-run inside folds. Throws std::runtime_error
/// if every grid fit fails to converge.
TuneResult tune(const DataMatrix& train, const ScreenSets& sets,
                const TuningPlan& plan, const DataMatrix* validation,
                Family family, const FitOptions& fit_opts = {});

/// Score table in long CSV form: lambda1,lambda2,fold,metric_value.
std::string score_table_csv(const std::vector<ScoreRow>& table);

}  // namespace pairsel
