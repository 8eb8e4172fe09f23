#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pairsel/data_matrix.hpp"
#include "pairsel/extreme_laws.hpp"

namespace pairsel {

enum class PairMethod { pearson, spearman };
enum class ScreenMode { linear, glm };

std::string to_string(PairMethod m);
std::string to_string(ScreenMode m);
PairMethod pair_method_from_string(const std::string& s);

/// SIS survivors m, screened pair set g (i < j, both members in m), and the
/// paired-covariate set c (union of pair members, sorted).
struct ScreenSets {
    std::vector<int> m;
    std::vector<std::pair<int, int>> g;
    std::vector<int> c;
    LawThresholds thresholds;
    PairMethod method = PairMethod::pearson;
    ScreenMode mode = ScreenMode::linear;
};

/// Indices of the k largest |corr(x_j, y)|, k defaulting to floor(n/ln n).
/// Ties break toward the lower column index; output is sorted by descending
/// correlation. k > p is clamped to p.
std::vector<int> sis_screen(const DataMatrix& d, std::optional<int> k = std::nullopt);

/// Pairs (i,j), i<j, i,j in m, with squared pair statistic above t_star
/// (Pearson) or s_star (Spearman) and pairwise R^2 >= r0. Degenerate pairs
/// are skipped.
std::vector<std::pair<int, int>> pair_screen(const DataMatrix& d,
                                             const std::vector<int>& m,
                                             const LawThresholds& thresholds,
                                             PairMethod method);

/// GLM variant: the R^2 condition is dropped.
std::vector<std::pair<int, int>> glm_pair_screen(const DataMatrix& d,
                                                 const std::vector<int>& m,
                                                 const LawThresholds& thresholds,
                                                 PairMethod method);

/// Union of pair members, sorted ascending.
std::vector<int> paired_set(const std::vector<std::pair<int, int>>& g);

/// Full screen: SIS, then pair screening within m, then the paired set.
ScreenSets screen(const DataMatrix& d, const LawThresholds& thresholds,
                  PairMethod method, ScreenMode mode,
                  std::optional<int> k = std::nullopt);

void to_json(nlohmann::json& j, const LawThresholds& t);
void from_json(const nlohmann::json& j, LawThresholds& t);
void to_json(nlohmann::json& j, const ScreenSets& s);
void from_json(const nlohmann::json& j, ScreenSets& s);

}  // namespace pairsel
