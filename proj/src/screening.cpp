#include "pairsel/screening.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "pairsel/pairwise_stats.hpp"

namespace pairsel {

std::string to_string(PairMethod m) {
    return m == PairMethod::pearson ? "pearson" : "spearman";
}

std::string to_string(ScreenMode m) { return m == ScreenMode::linear ? "linear" : "glm"; }

PairMethod pair_method_from_string(const std::string& s) {
    if (s == "pearson") return PairMethod::pearson;
    if (s == "spearman") return PairMethod::spearman;
    throw std::invalid_argument("unknown pair method: " + s);
}

std::vector<int> sis_screen(const DataMatrix& d, std::optional<int> k) {
    const Eigen::Index n = d.n();
    const Eigen::Index p = d.p();
    int kk = k.value_or(static_cast<int>(
        std::floor(static_cast<double>(n) / std::log(static_cast<double>(n)))));
    if (kk < 1) kk = 1;
    if (kk > p) kk = static_cast<int>(p);  // clamp; caller warned via size

    const Eigen::VectorXd w = marginal_correlations(d);
    std::vector<int> order(static_cast<std::size_t>(p));
    std::iota(order.begin(), order.end(), 0);
    // descending |corr|, ascending index on ties
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return w[a] > w[b]; });
    order.resize(static_cast<std::size_t>(kk));
    return order;
}

namespace {

std::vector<std::pair<int, int>> screen_pairs(const DataMatrix& d,
                                              const std::vector<int>& m,
                                              const LawThresholds& thresholds,
                                              PairMethod method, bool use_r2) {
    if (m.empty()) throw std::invalid_argument("pair_screen: empty SIS set");
    if (method == PairMethod::spearman && thresholds.s_star_saturated) {
        // saturated threshold admits no pair at this (n, p, alpha)
        return {};
    }

    // precompute the per-column statistic vectors once
    std::vector<Eigen::VectorXd> cols;
    cols.reserve(m.size());
    for (int j : m) {
        cols.push_back(method == PairMethod::spearman ? midranks(d.x.col(j))
                                                      : Eigen::VectorXd(d.x.col(j)));
    }

    const double threshold =
        method == PairMethod::pearson ? thresholds.t_star : thresholds.s_star;
    std::vector<std::pair<int, int>> g;
    for (std::size_t a = 0; a < m.size(); ++a) {
        for (std::size_t b = a + 1; b < m.size(); ++b) {
            const int i = std::min(m[a], m[b]);
            const int j = std::max(m[a], m[b]);
            try {
                const double rho = pearson_corr(cols[a], cols[b]);
                if (rho * rho < threshold) continue;
                if (use_r2 && pairwise_r_squared(d, i, j) < thresholds.r0) continue;
            } catch (const std::invalid_argument&) {
                continue;  // degenerate or collinear pair: skip
            }
            g.emplace_back(i, j);
        }
    }
    std::sort(g.begin(), g.end());
    return g;
}

}  // namespace

std::vector<std::pair<int, int>> pair_screen(const DataMatrix& d,
                                             const std::vector<int>& m,
                                             const LawThresholds& thresholds,
                                             PairMethod method) {
    return screen_pairs(d, m, thresholds, method, /*use_r2=*/true);
}

std::vector<std::pair<int, int>> glm_pair_screen(const DataMatrix& d,
                                                 const std::vector<int>& m,
                                                 const LawThresholds& thresholds,
                                                 PairMethod method) {
    return screen_pairs(d, m, thresholds, method, /*use_r2=*/false);
}

std::vector<int> paired_set(const std::vector<std::pair<int, int>>& g) {
    std::set<int> c;
    for (const auto& [i, j] : g) {
        c.insert(i);
        c.insert(j);
    }
    return {c.begin(), c.end()};
}

ScreenSets screen(const DataMatrix& d, const LawThresholds& thresholds,
                  PairMethod method, ScreenMode mode, std::optional<int> k) {
    ScreenSets s;
    s.thresholds = thresholds;
    s.method = method;
    s.mode = mode;
    s.m = sis_screen(d, k);
    s.g = mode == ScreenMode::glm ? glm_pair_screen(d, s.m, thresholds, method)
                                  : pair_screen(d, s.m, thresholds, method);
    s.c = paired_set(s.g);
    return s;
}

void to_json(nlohmann::json& j, const LawThresholds& t) {
    j = nlohmann::json{{"alpha", t.alpha},   {"delta", t.delta},
                       {"n", t.n},           {"p", t.p},
                       {"t_star", t.t_star}, {"s_star", t.s_star},
                       {"s_star_saturated", t.s_star_saturated},
                       {"r0", t.r0}};
}

void from_json(const nlohmann::json& j, LawThresholds& t) {
    j.at("alpha").get_to(t.alpha);
    j.at("delta").get_to(t.delta);
    j.at("n").get_to(t.n);
    j.at("p").get_to(t.p);
    j.at("t_star").get_to(t.t_star);
    j.at("s_star").get_to(t.s_star);
    j.at("s_star_saturated").get_to(t.s_star_saturated);
    j.at("r0").get_to(t.r0);
}

void to_json(nlohmann::json& j, const ScreenSets& s) {
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& [a, b] : s.g) pairs.push_back({a, b});
    j = nlohmann::json{{"schema_version", 1},
                       {"m", s.m},
                       {"g", pairs},
                       {"c", s.c},
                       {"thresholds", s.thresholds},
                       {"method", to_string(s.method)},
                       {"mode", to_string(s.mode)}};
}

void from_json(const nlohmann::json& j, ScreenSets& s) {
    j.at("m").get_to(s.m);
    s.g.clear();
    for (const auto& pr : j.at("g")) s.g.emplace_back(pr.at(0).get<int>(), pr.at(1).get<int>());
    j.at("c").get_to(s.c);
    j.at("thresholds").get_to(s.thresholds);
    s.method = pair_method_from_string(j.at("method").get<std::string>());
    s.mode = j.at("mode").get<std::string>() == "glm" ? ScreenMode::glm : ScreenMode::linear;
}

}  // namespace pairsel
