// Command-line front end for pairwise-screening penalized regression:
// thresholds, screening, fitting, simulation and Monte Carlo law validation.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "pairsel/csv.hpp"
#include "pairsel/extreme_laws.hpp"
#include "pairsel/screening.hpp"
#include "pairsel/simulate.hpp"
#include "pairsel/solver.hpp"
#include "pairsel/tuning.hpp"

using nlohmann::json;

namespace {

int default_threads() {
    if (const char* env = std::getenv("PAIRSEL_THREADS")) {
        const int t = std::atoi(env);
        if (t > 0) return t;
    }
    return 1;
}

void write_output(const json& j, const std::string& out_path) {
    const std::string text = j.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write " + out_path);
        out << text;
    }
}

std::variant<std::string, int> response_selector(const std::string& response) {
    // bare integers select by 0-based index, anything else by name
    if (!response.empty() &&
        response.find_first_not_of("0123456789") == std::string::npos)
        return std::stoi(response);
    return response;
}

pairsel::PipelineKind pipeline_kind(const std::string& s) {
    if (s == "pcs") return pairsel::PipelineKind::pcs;
    if (s == "sis-lasso") return pairsel::PipelineKind::sis_lasso;
    if (s == "sis-ridge") return pairsel::PipelineKind::sis_ridge;
    if (s == "lasso") return pairsel::PipelineKind::lasso;
    throw std::runtime_error("unknown pipeline kind: " + s);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Variable selection with pairwise correlation screening"};
    app.require_subcommand(1);

    std::string out_path;
    app.add_option("--out", out_path, "Write JSON output to this file instead of stdout")
        ->capture_default_str();

    // quantile
    auto* quantile = app.add_subcommand("quantile", "Print screening thresholds for (n, p, alpha, delta)");
    int q_n = 100;
    long long q_p = 1000;
    double q_alpha = 0.05, q_delta = 0.1;
    quantile->add_option("--n", q_n, "Sample size")->required();
    quantile->add_option("--p", q_p, "Dimension")->required();
    quantile->add_option("--alpha", q_alpha, "Quantile level for the correlation screens");
    quantile->add_option("--delta", q_delta, "Exponent margin for the R^2 threshold");

    // screen
    auto* screen_cmd = app.add_subcommand("screen", "Emit screening sets for a dataset");
    std::string s_data, s_response = "y", s_method = "pearson", s_family = "gaussian";
    double s_alpha = 0.05, s_delta = 0.1;
    int s_k = -1;
    bool s_no_header = false;
    screen_cmd->add_option("--data", s_data, "CSV input")->required();
    screen_cmd->add_option("--response", s_response, "Response column name or 0-based index");
    screen_cmd->add_option("--method", s_method, "pearson|spearman");
    screen_cmd->add_option("--family", s_family, "gaussian|binomial");
    screen_cmd->add_option("--alpha", s_alpha, "Quantile level");
    screen_cmd->add_option("--delta", s_delta, "R^2 threshold margin");
    screen_cmd->add_option("--k", s_k, "SIS subset size (default floor(n/ln n))");
    screen_cmd->add_flag("--no-header", s_no_header, "CSV has no header row");

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "Screen, tune and fit the full pipeline");
    std::string f_train, f_validation, f_response = "y", f_method = "pearson",
                f_family = "gaussian", f_predict_csv;
    double f_alpha = 0.05, f_delta = 0.1;
    std::vector<double> f_lambda1, f_lambda2;
    int f_kfold = 0;
    std::uint64_t f_seed = 0;
    bool f_no_header = false;
    fit_cmd->add_option("--train", f_train, "Training CSV")->required();
    fit_cmd->add_option("--validation", f_validation, "Validation CSV (omit to use k-fold CV)");
    fit_cmd->add_option("--response", f_response, "Response column name or 0-based index");
    fit_cmd->add_option("--method", f_method, "pearson|spearman");
    fit_cmd->add_option("--family", f_family, "gaussian|binomial");
    fit_cmd->add_option("--alpha", f_alpha, "Quantile level");
    fit_cmd->add_option("--delta", f_delta, "R^2 threshold margin");
    fit_cmd->add_option("--lambda1", f_lambda1, "Explicit lambda1 grid");
    fit_cmd->add_option("--lambda2", f_lambda2, "Explicit lambda2 grid");
    fit_cmd->add_option("--kfold", f_kfold, "Fold count when no validation set is given");
    fit_cmd->add_option("--seed", f_seed, "Fold-assignment seed");
    fit_cmd->add_option("--predictions", f_predict_csv, "Write training-set predictions CSV here");
    fit_cmd->add_flag("--no-header", f_no_header, "CSV has no header row");

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "Run a benchmark scenario");
    int sim_example = 1, sim_p = 1000, sim_reps = 20;
    double sim_sigma = 2.0;
    std::uint64_t sim_seed = 0;
    std::string sim_method = "pearson", sim_kind = "pcs", sim_csv;
    int sim_threads = default_threads();
    sim_cmd->add_option("--example", sim_example, "Scenario id 1..5")->required();
    sim_cmd->add_option("--p", sim_p, "Dimension");
    sim_cmd->add_option("--sigma", sim_sigma, "Noise scale");
    sim_cmd->add_option("--reps", sim_reps, "Replication count");
    sim_cmd->add_option("--seed", sim_seed, "Scenario seed");
    sim_cmd->add_option("--method", sim_method, "pearson|spearman");
    sim_cmd->add_option("--pipeline", sim_kind, "pcs|sis-lasso|sis-ridge|lasso");
    sim_cmd->add_option("--threads", sim_threads, "Worker threads");
    sim_cmd->add_option("--csv", sim_csv, "Also write a long-format metrics CSV here");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "Sensitivity sweep over (n, p, sigma)");
    int sw_example = 1, sw_reps = 20;
    std::vector<int> sw_n{100}, sw_p{500, 1000};
    std::vector<double> sw_sigma{2.0};
    std::uint64_t sw_seed = 0;
    std::string sw_csv, sw_method = "pearson";
    int sw_threads = default_threads();
    sweep_cmd->add_option("--example", sw_example, "Scenario id 1..5");
    sweep_cmd->add_option("--n-values", sw_n, "Training sample sizes");
    sweep_cmd->add_option("--p-values", sw_p, "Dimensions");
    sweep_cmd->add_option("--sigma-values", sw_sigma, "Noise scales");
    sweep_cmd->add_option("--reps", sw_reps, "Replications per cell");
    sweep_cmd->add_option("--seed", sw_seed, "Scenario seed");
    sweep_cmd->add_option("--method", sw_method, "pearson|spearman");
    sweep_cmd->add_option("--threads", sw_threads, "Worker threads");
    sweep_cmd->add_option("--csv", sw_csv, "Write the long-format grid CSV here");

    // validate-laws
    auto* laws_cmd = app.add_subcommand("validate-laws", "Monte Carlo check of the limiting laws");
    int l_n = 10, l_p = 200, l_reps = 1000;
    double l_alpha = 0.05, l_delta = 1.0;
    std::uint64_t l_seed = 0;
    int l_threads = default_threads();
    laws_cmd->add_option("--n", l_n, "Sample size")->required();
    laws_cmd->add_option("--p", l_p, "Dimension")->required();
    laws_cmd->add_option("--reps", l_reps, "Null replicates");
    laws_cmd->add_option("--alpha", l_alpha, "Threshold level to check exceedance against");
    laws_cmd->add_option("--delta", l_delta, "R^2 threshold margin");
    laws_cmd->add_option("--seed", l_seed, "Seed");
    laws_cmd->add_option("--threads", l_threads, "Worker threads");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*quantile) {
            const auto t = pairsel::compute_thresholds(q_alpha, q_delta, q_n, q_p);
            json j;
            pairsel::to_json(j, t);
            j["schema_version"] = 1;
            write_output(j, out_path);
        } else if (*screen_cmd) {
            const pairsel::DataMatrix d =
                pairsel::ingest_csv(s_data, response_selector(s_response), !s_no_header);
            const auto thr = pairsel::compute_thresholds(
                s_alpha, s_delta, static_cast<int>(d.n()), d.p());
            const auto mode = s_family == "binomial" ? pairsel::ScreenMode::glm
                                                     : pairsel::ScreenMode::linear;
            const auto sets = pairsel::screen(
                d, thr, pairsel::pair_method_from_string(s_method), mode,
                s_k > 0 ? std::optional<int>(s_k) : std::nullopt);
            json j = sets;
            write_output(j, out_path);
        } else if (*fit_cmd) {
            const pairsel::DataMatrix train =
                pairsel::ingest_csv(f_train, response_selector(f_response), !f_no_header);
            std::optional<pairsel::DataMatrix> validation;
            if (!f_validation.empty())
                validation = pairsel::ingest_csv(f_validation, response_selector(f_response),
                                                 !f_no_header);
            const auto family = f_family == "binomial" ? pairsel::Family::binomial
                                                       : pairsel::Family::gaussian;
            const auto mode = family == pairsel::Family::binomial
                                  ? pairsel::ScreenMode::glm
                                  : pairsel::ScreenMode::linear;
            const auto thr = pairsel::compute_thresholds(
                f_alpha, f_delta, static_cast<int>(train.n()), train.p());
            const auto sets = pairsel::screen(
                train, thr, pairsel::pair_method_from_string(f_method), mode);

            pairsel::TuningPlan plan;
            plan.lambda1_grid = f_lambda1;
            plan.lambda2_grid = f_lambda2;
            plan.seed = f_seed;
            plan.metric = family == pairsel::Family::binomial
                              ? pairsel::TuneMetric::classification_error
                              : pairsel::TuneMetric::mse;
            if (validation) {
                plan.strategy = pairsel::TuningPlan::Strategy::validation_set;
            } else {
                plan.strategy = pairsel::TuningPlan::Strategy::kfold;
                plan.k = f_kfold > 0 ? f_kfold : 5;
            }
            const auto result = pairsel::tune(train, sets, plan,
                                              validation ? &*validation : nullptr, family);
            json j = result.model;
            j["lambda1"] = result.lambda1;
            j["lambda2"] = result.lambda2;
            j["screen"] = sets;
            write_output(j, out_path);
            if (!f_predict_csv.empty())
                pairsel::write_predictions_csv(f_predict_csv,
                                               pairsel::predict(result.model, train.x));
        } else if (*sim_cmd) {
            const auto scenario = pairsel::example_scenario(sim_example, sim_p, sim_sigma,
                                                            sim_reps, sim_seed);
            pairsel::PipelineConfig config;
            config.kind = pipeline_kind(sim_kind);
            config.method = pairsel::pair_method_from_string(sim_method);
            config.threads = sim_threads;
            const auto report = pairsel::run_scenario(scenario, config);
            json j = report;
            write_output(j, out_path);
            if (!sim_csv.empty()) {
                std::ofstream out(sim_csv);
                if (!out) throw std::runtime_error("cannot write " + sim_csv);
                out << pairsel::report_csv(report);
            }
        } else if (*sweep_cmd) {
            auto base = pairsel::example_scenario(sw_example, sw_p.front(),
                                                  sw_sigma.front(), sw_reps, sw_seed);
            pairsel::PipelineConfig config;
            config.method = pairsel::pair_method_from_string(sw_method);
            config.threads = sw_threads;
            const auto grid = pairsel::sensitivity_sweep(base, sw_n, sw_p, sw_sigma, config);
            json j = json::array();
            for (const auto& r : grid) j.push_back(r);
            write_output(json{{"schema_version", 1}, {"reports", j}}, out_path);
            if (!sw_csv.empty()) {
                std::ofstream out(sw_csv);
                if (!out) throw std::runtime_error("cannot write " + sw_csv);
                out << pairsel::report_csv(grid);
            }
        } else if (*laws_cmd) {
            const auto report = pairsel::validate_laws(l_n, l_p, l_reps, l_seed, l_alpha,
                                                       l_delta, l_threads);
            json j = report;
            write_output(j, out_path);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
