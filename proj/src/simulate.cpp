#include "pairsel/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include <Eigen/Cholesky>

#include "pairsel/extreme_laws.hpp"
#include "pairsel/pairwise_stats.hpp"
#include "pairsel/parallel.hpp"
#include "pairsel/rng.hpp"

namespace pairsel {

namespace {

constexpr double kBlockRho = 0.8;
constexpr double kAr1Rho = 0.5;
constexpr int kStudentTDof = 5;

std::string covariance_name(CovarianceKind k) {
    switch (k) {
        case CovarianceKind::block: return "block";
        case CovarianceKind::ar1: return "ar1";
        case CovarianceKind::block_partial: return "block_partial";
        case CovarianceKind::identity: return "identity";
    }
    return "?";
}

// Cholesky factor of the leading correlated block; covariates beyond it are
// independent. AR(1) is handled by recursion instead (its Cholesky in closed
// form), so only block structures go through here.
Eigen::MatrixXd leading_block_cholesky(CovarianceKind kind, int p) {
    int k = 0;
    if (kind == CovarianceKind::block) k = std::min(p, 10);
    if (kind == CovarianceKind::block_partial) k = std::min(p, 5);
    if (k == 0) return {};
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Identity(k, k);
    auto fill = [&](int lo, int hi) {
        for (int i = lo; i < hi; ++i)
            for (int j = lo; j < hi; ++j)
                if (i != j) sigma(i, j) = kBlockRho;
    };
    fill(0, std::min(k, 5));
    if (kind == CovarianceKind::block && k > 5) fill(5, k);
    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("generate: covariance " + covariance_name(kind) +
                                 " is not positive definite");
    return llt.matrixL();
}

DataMatrix draw_dataset(const SimScenario& s, int n, Rng& rng,
                        const Eigen::MatrixXd& block_l) {
    const int p = s.p;
    DataMatrix d;
    d.x.resize(n, p);
    Eigen::VectorXd z(p);
    const double ar_sd = std::sqrt(1.0 - kAr1Rho * kAr1Rho);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < p; ++j) z[j] = rng.normal();
        auto row = d.x.row(i);
        switch (s.covariance) {
            case CovarianceKind::identity:
                row = z;
                break;
            case CovarianceKind::ar1:
                row[0] = z[0];
                for (int j = 1; j < p; ++j) row[j] = kAr1Rho * row[j - 1] + ar_sd * z[j];
                break;
            case CovarianceKind::block:
            case CovarianceKind::block_partial: {
                const int k = static_cast<int>(block_l.rows());
                row.head(k) = (block_l * z.head(k)).transpose();
                if (p > k) row.tail(p - k) = z.tail(p - k).transpose();
                break;
            }
        }
        if (s.covariate_law == CovariateLaw::student_t) {
            const double w = rng.chi_squared(kStudentTDof);
            row *= std::sqrt(static_cast<double>(kStudentTDof) / w);
        }
    }
    d.y.resize(n);
    const Eigen::VectorXd signal = d.x * s.beta0;
    for (int i = 0; i < n; ++i) {
        if (s.response_law == ResponseLaw::linear) {
            d.y[i] = signal[i] + s.sigma * rng.normal();
        } else {
            // sigma enters the linear predictor as a constant shift
            const double eta = signal[i] + s.sigma;
            const double pr = eta >= 0.0 ? 1.0 / (1.0 + std::exp(-eta))
                                         : std::exp(eta) / (1.0 + std::exp(eta));
            d.y[i] = rng.bernoulli(pr) ? 1.0 : 0.0;
        }
    }
    return d;
}

MetricAggregate aggregate(const std::vector<MetricsRecord>& records,
                          double MetricsRecord::* field) {
    MetricAggregate a;
    int count = 0;
    for (const auto& r : records) {
        if (r.failed) continue;
        a.mean += r.*field;
        ++count;
    }
    if (count == 0) return a;
    a.mean /= count;
    double ss = 0.0;
    for (const auto& r : records) {
        if (r.failed) continue;
        const double d = r.*field - a.mean;
        ss += d * d;
    }
    if (count > 1)
        a.se = std::sqrt(ss / (count - 1)) / std::sqrt(static_cast<double>(count));
    return a;
}

}  // namespace

SimScenario example_scenario(int example_id, int p, double sigma, int replications,
                             std::uint64_t seed) {
    SimScenario s;
    s.example_id = example_id;
    s.p = p;
    s.sigma = sigma;
    s.replications = replications;
    s.seed = seed;
    s.beta0 = Eigen::VectorXd::Zero(p);
    switch (example_id) {
        case 1:
            s.covariance = CovarianceKind::block;
            break;
        case 2:
            s.covariance = CovarianceKind::ar1;
            break;
        case 3:
            s.covariance = CovarianceKind::block_partial;
            break;
        case 4:
            s.covariance = CovarianceKind::block;
            s.response_law = ResponseLaw::logistic;
            break;
        case 5:
            s.covariance = CovarianceKind::block;
            s.covariate_law = CovariateLaw::student_t;
            break;
        default:
            throw std::invalid_argument("example_scenario: example_id must be 1..5");
    }
    if (example_id == 2) {
        if (p < 3) throw std::invalid_argument("example_scenario: example 2 needs p >= 3");
        s.beta0[0] = 3.0;
        s.beta0[1] = -1.5;
        s.beta0[2] = 2.0;
    } else {
        if (p < 10) throw std::invalid_argument("example_scenario: need p >= 10");
        s.beta0.head(10).setConstant(2.0);
    }
    return s;
}

Dataset3 generate(const SimScenario& scenario, int replication_index) {
    if (scenario.beta0.size() != scenario.p)
        throw std::invalid_argument("generate: beta0 length does not match p");
    const Eigen::MatrixXd block_l = leading_block_cholesky(scenario.covariance, scenario.p);
    Dataset3 out;
    const auto rep = static_cast<std::uint64_t>(replication_index);
    {
        Rng rng = Rng::substream(scenario.seed, rep, 0);
        out.train = draw_dataset(scenario, scenario.n_train, rng, block_l);
    }
    {
        Rng rng = Rng::substream(scenario.seed, rep, 1);
        out.validation = draw_dataset(scenario, scenario.n_val, rng, block_l);
    }
    {
        Rng rng = Rng::substream(scenario.seed, rep, 2);
        out.test = draw_dataset(scenario, scenario.n_test, rng, block_l);
    }
    return out;
}

MetricsRecord evaluate(const FitModel& model, const Eigen::VectorXd& beta0,
                       const DataMatrix& test, ResponseLaw law) {
    if (model.beta_original.size() != beta0.size())
        throw std::invalid_argument("evaluate: dimension mismatch");
    MetricsRecord r;
    for (Eigen::Index j = 0; j < beta0.size(); ++j) {
        const bool est_zero = model.beta_original[j] == 0.0;
        const bool true_zero = beta0[j] == 0.0;
        if (est_zero && !true_zero) r.fn += 1.0;
        if (!est_zero && true_zero) r.fp += 1.0;
    }
    r.l2_error = (model.beta_original - beta0).norm();
    r.model_size = static_cast<int>(model.active_set.size());
    const Eigen::VectorXd pred = predict(model, test.x);
    if (law == ResponseLaw::linear) {
        r.mse = (test.y - pred).squaredNorm() / static_cast<double>(test.n());
    } else {
        double err = 0.0;
        for (Eigen::Index i = 0; i < test.n(); ++i)
            err += (pred[i] >= 0.5 ? 1.0 : 0.0) != test.y[i];
        r.mse = err / static_cast<double>(test.n());
    }
    return r;
}

SimReport run_scenario(const SimScenario& scenario, const PipelineConfig& config) {
    SimReport report;
    report.scenario = scenario;
    report.config = config;
    report.generator_id = kGeneratorId;
    report.records.resize(static_cast<std::size_t>(scenario.replications));

    const Family family = scenario.response_law == ResponseLaw::linear
                              ? Family::gaussian
                              : Family::binomial;

    parallel_for(scenario.replications, config.threads, [&](int rep) {
        MetricsRecord& rec = report.records[static_cast<std::size_t>(rep)];
        rec.replication = rep;
        try {
            const Dataset3 data = generate(scenario, rep);
            const DataMatrix& train = data.train;

            ScreenSets sets;
            if (config.kind == PipelineKind::pcs) {
                const LawThresholds thr =
                    compute_thresholds(config.alpha, config.delta, scenario.n_train,
                                       scenario.p);
                const ScreenMode mode = scenario.response_law == ResponseLaw::logistic
                                            ? ScreenMode::glm
                                            : ScreenMode::linear;
                sets = screen(train, thr, config.method, mode);
            } else if (config.kind == PipelineKind::lasso) {
                sets.m.resize(static_cast<std::size_t>(scenario.p));
                for (int j = 0; j < scenario.p; ++j) sets.m[static_cast<std::size_t>(j)] = j;
            } else {
                sets.m = sis_screen(train);
                if (config.kind == PipelineKind::sis_ridge) {
                    for (std::size_t a = 0; a < sets.m.size(); ++a)
                        for (std::size_t b = a + 1; b < sets.m.size(); ++b)
                            sets.g.emplace_back(std::min(sets.m[a], sets.m[b]),
                                                std::max(sets.m[a], sets.m[b]));
                    std::sort(sets.g.begin(), sets.g.end());
                    sets.c = paired_set(sets.g);
                }
            }

            TuningPlan plan = config.plan;
            plan.metric = scenario.response_law == ResponseLaw::linear
                              ? TuneMetric::mse
                              : TuneMetric::classification_error;
            plan.seed = splitmix64(scenario.seed ^ static_cast<std::uint64_t>(rep));
            const TuneResult tuned =
                tune(train, sets, plan, &data.validation, family, config.fit_opts);
            rec = evaluate(tuned.model, scenario.beta0, data.test, scenario.response_law);
            rec.replication = rep;
        } catch (const std::exception&) {
            rec.failed = true;
        }
    });

    for (const auto& r : report.records) report.failures += r.failed;
    report.fn = aggregate(report.records, &MetricsRecord::fn);
    report.fp = aggregate(report.records, &MetricsRecord::fp);
    report.l2_error = aggregate(report.records, &MetricsRecord::l2_error);
    report.mse = aggregate(report.records, &MetricsRecord::mse);
    return report;
}

std::vector<SimReport> sensitivity_sweep(const SimScenario& base,
                                         const std::vector<int>& n_values,
                                         const std::vector<int>& p_values,
                                         const std::vector<double>& sigma_values,
                                         const PipelineConfig& config) {
    std::vector<SimReport> grid;
    for (int n : n_values) {
        for (int p : p_values) {
            for (double sigma : sigma_values) {
                SimScenario s =
                    example_scenario(base.example_id, p, sigma, base.replications, base.seed);
                s.n_train = n;
                s.n_val = base.n_val;
                s.n_test = base.n_test;
                grid.push_back(run_scenario(s, config));
            }
        }
    }
    return grid;
}

double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf) {
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double ks = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        ks = std::max(ks, std::abs(f - static_cast<double>(i + 1) / n));
        ks = std::max(ks, std::abs(f - static_cast<double>(i) / n));
    }
    return ks;
}

LawReport validate_laws(int n, int p, int replicates, std::uint64_t seed,
                        double alpha, double delta, int threads) {
    if (replicates < 100)
        throw std::invalid_argument("validate_laws: need at least 100 replicates");
    LawReport rep;
    rep.n = n;
    rep.p = p;
    rep.replicates = replicates;
    rep.seed = seed;
    rep.alpha = alpha;
    rep.delta = delta;
    rep.generator_id = kGeneratorId;

    const NormalizingConstants nc = normalizing_constants(n, p);
    const double t_star = w2_threshold(alpha, n, p);
    const double s_star = spearman_threshold(alpha, n, p);
    const double r0 = r_squared_threshold(delta, n, p);
    const double lp = std::log(static_cast<double>(p));

    std::vector<double> w2_stats(static_cast<std::size_t>(replicates));
    std::vector<double> sp_stats(static_cast<std::size_t>(replicates));
    std::vector<int> w2_exceed(static_cast<std::size_t>(replicates));
    std::vector<int> sp_exceed(static_cast<std::size_t>(replicates));
    std::vector<int> r2_exceed(static_cast<std::size_t>(replicates));

    parallel_for(replicates, threads, [&](int r) {
        Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(r), 100);
        Eigen::MatrixXd x(n, p);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < p; ++j) x(i, j) = rng.normal();
        Eigen::VectorXd y(n);
        for (int i = 0; i < n; ++i) y[i] = rng.normal();

        // unit-norm centered columns; Gram gives all pairwise correlations
        Eigen::MatrixXd u = x.rowwise() - x.colwise().mean();
        for (int j = 0; j < p; ++j) u.col(j).normalize();
        const Eigen::MatrixXd gram = u.transpose() * u;

        Eigen::VectorXd yv = y.array() - y.mean();
        yv.normalize();
        const Eigen::VectorXd ry = u.transpose() * yv;

        double w2 = 0.0;
        double r2max = 0.0;
        for (int i = 0; i < p; ++i) {
            for (int j = i + 1; j < p; ++j) {
                const double rho2 = gram(i, j) * gram(i, j);
                w2 = std::max(w2, rho2);
                const double det = 1.0 - rho2;
                if (det > 1e-12) {
                    const double r2 = (ry[i] * ry[i] + ry[j] * ry[j] -
                                       2.0 * ry[i] * ry[j] * gram(i, j)) /
                                      det;
                    r2max = std::max(r2max, r2);
                }
            }
        }

        Eigen::MatrixXd ranks(n, p);
        for (int j = 0; j < p; ++j) ranks.col(j) = midranks(x.col(j));
        Eigen::MatrixXd rr = ranks.rowwise() - ranks.colwise().mean();
        for (int j = 0; j < p; ++j) rr.col(j).normalize();
        const Eigen::MatrixXd sp_gram = rr.transpose() * rr;
        double s2 = 0.0;
        for (int i = 0; i < p; ++i)
            for (int j = i + 1; j < p; ++j)
                s2 = std::max(s2, sp_gram(i, j) * sp_gram(i, j));

        const auto idx = static_cast<std::size_t>(r);
        w2_stats[idx] = (w2 - nc.a) / nc.b;
        sp_stats[idx] = static_cast<double>(n - 1) * s2 - 4.0 * lp + std::log(lp);
        w2_exceed[idx] = w2 >= t_star;
        sp_exceed[idx] = s2 >= s_star;
        r2_exceed[idx] = r2max >= r0;
    });

    rep.ks_w2 = ks_distance(w2_stats, [n](double x) { return limiting_cdf_w2(x, n); });
    rep.ks_spearman = ks_distance(sp_stats, [](double x) { return limiting_cdf_spearman(x); });
    const double nr = static_cast<double>(replicates);
    rep.w2_exceedance =
        std::accumulate(w2_exceed.begin(), w2_exceed.end(), 0) / nr;
    rep.spearman_exceedance =
        std::accumulate(sp_exceed.begin(), sp_exceed.end(), 0) / nr;
    rep.r2_tail_frequency =
        std::accumulate(r2_exceed.begin(), r2_exceed.end(), 0) / nr;
    return rep;
}

void to_json(nlohmann::json& j, const SimScenario& s) {
    j = nlohmann::json{
        {"example_id", s.example_id},
        {"n_train", s.n_train},
        {"n_val", s.n_val},
        {"n_test", s.n_test},
        {"p", s.p},
        {"sigma", s.sigma},
        {"covariance", covariance_name(s.covariance)},
        {"covariate_law", s.covariate_law == CovariateLaw::gaussian ? "gaussian" : "student_t"},
        {"response_law", s.response_law == ResponseLaw::linear ? "linear" : "logistic"},
        {"replications", s.replications},
        {"seed", s.seed}};
}

void to_json(nlohmann::json& j, const SimReport& r) {
    nlohmann::json records = nlohmann::json::array();
    for (const auto& rec : r.records) {
        records.push_back({{"replication", rec.replication},
                           {"fn", rec.fn},
                           {"fp", rec.fp},
                           {"l2_error", rec.l2_error},
                           {"mse", rec.mse},
                           {"model_size", rec.model_size},
                           {"failed", rec.failed}});
    }
    auto agg = [](const MetricAggregate& a) {
        return nlohmann::json{{"mean", a.mean}, {"se", a.se}};
    };
    j = nlohmann::json{{"schema_version", 1},
                       {"scenario", r.scenario},
                       {"records", records},
                       {"aggregates",
                        {{"fn", agg(r.fn)},
                         {"fp", agg(r.fp)},
                         {"l2_error", agg(r.l2_error)},
                         {"mse", agg(r.mse)}}},
                       {"failures", r.failures},
                       {"generator", r.generator_id}};
}

void to_json(nlohmann::json& j, const LawReport& r) {
    j = nlohmann::json{{"schema_version", 1},
                       {"n", r.n},
                       {"p", r.p},
                       {"replicates", r.replicates},
                       {"seed", r.seed},
                       {"alpha", r.alpha},
                       {"delta", r.delta},
                       {"ks_w2", r.ks_w2},
                       {"ks_spearman", r.ks_spearman},
                       {"w2_exceedance", r.w2_exceedance},
                       {"spearman_exceedance", r.spearman_exceedance},
                       {"r2_tail_frequency", r.r2_tail_frequency},
                       {"generator", r.generator_id}};
}

std::string report_csv(const SimReport& r) {
    std::string out = "example_id,n_train,p,sigma,replication,metric,value\n";
    char buf[192];
    const char* mse_name =
        r.scenario.response_law == ResponseLaw::linear ? "mse" : "classification_error";
    for (const auto& rec : r.records) {
        if (rec.failed) continue;
        auto emit = [&](const char* metric, double value) {
            std::snprintf(buf, sizeof(buf), "%d,%d,%d,%.17g,%d,%s,%.17g\n",
                          r.scenario.example_id, r.scenario.n_train, r.scenario.p,
                          r.scenario.sigma, rec.replication, metric, value);
            out += buf;
        };
        emit("fn", rec.fn);
        emit("fp", rec.fp);
        emit("l2_error", rec.l2_error);
        emit(mse_name, rec.mse);
        emit("model_size", rec.model_size);
    }
    return out;
}

std::string report_csv(const std::vector<SimReport>& reports) {
    std::string out = "example_id,n_train,p,sigma,replication,metric,value\n";
    for (const auto& r : reports) {
        const std::string one = report_csv(r);
        out += one.substr(one.find('\n') + 1);  // drop per-report header
    }
    return out;
}

}  // namespace pairsel
