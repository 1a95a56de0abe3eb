#pragma once

// Data-parallel inner loops. Each kernel exists twice with the same
// signature: ppmx::kernels::serial is the reference, ppmx::kernels::parallel
// the OpenMP version. Work items (column pairs, columns, instances) are
// computed independently and combined in a fixed order, so both produce
// bit-identical output regardless of thread count or schedule.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ppmx/feature_matrix.hpp"
#include "ppmx/gbt.hpp"

namespace ppmx::kernels {

using MarginFn = std::function<double(std::span<const double>)>;

struct SplitSearchInput {
  std::span<const double> column_major;  // n_cols blocks of n_rows values
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  // Row indices of each column sorted by value (ties by row index).
  const std::vector<std::vector<std::uint32_t>>* sorted_rows = nullptr;
  std::span<const double> grad;
  std::span<const double> hess;
  std::span<const int> node_of_row;  // slot of the row's open node, -1 if none
  std::span<const double> node_grad;  // per slot
  std::span<const double> node_hess;
  std::span<const unsigned char> column_allowed;
  double l2 = 1.0;
  double min_split_gain = 0.0;
  double min_child_cover = 1.0;
};

struct SplitCandidate {
  double gain = 0.0;
  int feature = -1;
  double threshold = 0.0;
  double left_grad = 0.0;
  double left_hess = 0.0;

  bool valid() const { return feature >= 0; }
};

namespace serial {

// Pearson correlation of every column pair, row-major d x d. Constant
// columns correlate 0 with everything, themselves included.
std::vector<double> pearson(std::span<const std::vector<double>> columns);

// Best split per open node slot.
std::vector<SplitCandidate> find_best_splits(const SplitSearchInput& in);

// AUC drop per (column, iteration), laid out column-major:
// drops[c * n_iter + it]. Column c shuffles with the stream (seed, c).
std::vector<double> permutation_drops(const MarginFn& margin, const FeatureMatrix& m, int n_iter,
                                      std::uint64_t seed, double baseline_auc);

// Interventional Shapley values of the ensemble margin, averaged over
// background rows. Row-major n_instances x n_cols.
std::vector<double> tree_shap(const TreeEnsemble& model, const FeatureMatrix& instances,
                              const FeatureMatrix& background);

}  // namespace serial

namespace parallel {

std::vector<double> pearson(std::span<const std::vector<double>> columns);
std::vector<SplitCandidate> find_best_splits(const SplitSearchInput& in);
std::vector<double> permutation_drops(const MarginFn& margin, const FeatureMatrix& m, int n_iter,
                                      std::uint64_t seed, double baseline_auc);
std::vector<double> tree_shap(const TreeEnsemble& model, const FeatureMatrix& instances,
                              const FeatureMatrix& background);

}  // namespace parallel

}  // namespace ppmx::kernels
