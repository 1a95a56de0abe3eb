#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ppmx/exec.hpp"
#include "ppmx/feature_matrix.hpp"

namespace ppmx {

struct GbtConfig {
  int n_trees = 100;
  int max_depth = 4;
  double learning_rate = 0.3;
  double l2 = 1.0;
  double min_split_gain = 0.0;
  double min_child_cover = 1.0;
  // Row and per-tree column sampling; 1.0 disables. Seeded by `seed`.
  double subsample = 1.0;
  double colsample = 1.0;
  std::uint64_t seed = 0;

  bool subsampling() const { return subsample < 1.0 || colsample < 1.0; }
};

struct TreeNode {
  int feature = -1;
  double threshold = 0.0;  // rows with value < threshold go left
  int left = -1;
  int right = -1;
  double gain = 0.0;        // split gain, split nodes only
  double cover = 0.0;       // sum of Hessians reaching the node
  double leaf_value = 0.0;  // learning-rate scaled, leaves only

  bool is_leaf() const { return left < 0; }
  bool operator==(const TreeNode&) const = default;
};

struct RegressionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  double predict(std::span<const double> row) const;
  int depth() const;
  bool operator==(const RegressionTree&) const = default;
};

struct TreeEnsemble {
  std::vector<std::string> column_names;
  std::vector<RegressionTree> trees;
  double base_score = 0.0;  // margin before any tree
  double learning_rate = 0.3;
  std::vector<double> train_loss;  // mean log-loss after each round

  double margin(std::span<const double> row) const;
  std::vector<double> margins(const FeatureMatrix& m) const;

  bool operator==(const TreeEnsemble&) const = default;
};

// Second-order boosting with the binary logistic objective and exact greedy
// splits. Split gain = 0.5 [GL^2/(HL+l2) + GR^2/(HR+l2) - G^2/(H+l2)] - gamma;
// equal gains go to the lowest column, then the lowest threshold.
TreeEnsemble train_gbt(const FeatureMatrix& m, const GbtConfig& config, Exec exec = Exec::kParallel);

}  // namespace ppmx
