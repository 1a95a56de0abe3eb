#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ppmx/gbt.hpp"
#include "ppmx/logreg.hpp"

namespace ppmx {

// Feature -> score map with a ranking (descending score, ties by ascending
// column index).
struct ImportanceVector {
  std::string criterion;
  std::vector<std::string> columns;
  std::vector<double> scores;
  std::vector<int> signs;  // LR coefficients only: -1, 0 or +1
  std::vector<std::size_t> ranking;

  std::vector<std::size_t> top_k(std::size_t k) const;
  std::vector<std::string> top_k_names(std::size_t k) const;
  double score_of(const std::string& column) const;

  bool operator==(const ImportanceVector&) const = default;
};

ImportanceVector make_importance(std::string criterion, std::vector<std::string> columns,
                                 std::vector<double> scores, std::vector<int> signs = {});

ImportanceVector lr_coefficients(const LinearModel& model);

enum class GbtCriterion { kWeight, kGain, kCover, kTotalGain, kTotalCover };

inline constexpr GbtCriterion kAllGbtCriteria[] = {GbtCriterion::kWeight, GbtCriterion::kGain, GbtCriterion::kCover,
                                                   GbtCriterion::kTotalGain, GbtCriterion::kTotalCover};

const char* to_string(GbtCriterion c);
GbtCriterion parse_gbt_criterion(const std::string& text);

// weight = #splits on the column; total_* = sums over those splits;
// gain/cover = total / weight; unused columns score 0.
ImportanceVector gbt_importance(const TreeEnsemble& model, GbtCriterion criterion);

}  // namespace ppmx
