#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ppmx/exec.hpp"
#include "ppmx/feature_matrix.hpp"
#include "ppmx/gbt.hpp"
#include "ppmx/importance.hpp"
#include "ppmx/kernels.hpp"
#include "ppmx/logreg.hpp"

namespace ppmx {

inline constexpr int kDefaultPfiIterations = 10;

// Importance of a column = baseline AUC - AUC after shuffling that column,
// averaged over n_iter shuffles. std is the population std over shuffles.
struct PfiReport {
  std::vector<std::string> columns;
  std::vector<double> mean;
  std::vector<double> stddev;
  double baseline_auc = 0.0;
  int n_iter = kDefaultPfiIterations;
  std::uint64_t seed = 0;

  ImportanceVector importance() const;
  bool operator==(const PfiReport&) const = default;
};

PfiReport permutation_importance(const kernels::MarginFn& margin, const FeatureMatrix& m,
                                 int n_iter = kDefaultPfiIterations, std::uint64_t seed = 0,
                                 Exec exec = Exec::kParallel);
PfiReport permutation_importance(const LinearModel& model, const FeatureMatrix& m,
                                 int n_iter = kDefaultPfiIterations, std::uint64_t seed = 0,
                                 Exec exec = Exec::kParallel);
PfiReport permutation_importance(const TreeEnsemble& model, const FeatureMatrix& m,
                                 int n_iter = kDefaultPfiIterations, std::uint64_t seed = 0,
                                 Exec exec = Exec::kParallel);

}  // namespace ppmx
