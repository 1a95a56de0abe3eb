#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ppmx/exec.hpp"
#include "ppmx/feature_matrix.hpp"
#include "ppmx/gbt.hpp"
#include "ppmx/importance.hpp"
#include "ppmx/logreg.hpp"

namespace ppmx {

// Shapley attribution of one instance's raw margin (log-odds):
// base + sum(phi) == output.
struct Attribution {
  std::vector<double> phi;
  double base = 0.0;
  double output = 0.0;
};

// Attributions for a set of rows plus where the explainer came from.
struct AttributionSet {
  std::vector<std::string> columns;
  std::vector<RowId> rows;
  std::vector<Attribution> attributions;
  std::vector<double> feature_values;  // raw matrix values, row-major
  std::string method;                  // "linear" or "tree_interventional"
  std::string background_source;       // split the explainer was fitted on
  std::string explained_split;
  std::size_t background_size = 0;
  std::uint64_t seed = 0;
};

// Exact SHAP for the linear model with the training means as background:
// phi_j = w_j (x_j - mean_j) in the scaled space, base = w . mean + b.
class LinearShapExplainer {
 public:
  LinearShapExplainer(LinearModel model, const FeatureMatrix& background, std::string background_source);
  LinearShapExplainer(LinearModel model, std::vector<double> scaled_means, std::string background_source);

  Attribution explain(std::span<const double> raw_row) const;
  AttributionSet explain(const FeatureMatrix& m, const std::string& split) const;
  const std::vector<double>& scaled_means() const { return means_; }

 private:
  LinearModel model_;
  std::vector<double> means_;
  std::string source_;
};

inline constexpr std::size_t kDefaultBackgroundSize = 100;

// Interventional tree SHAP over a fixed background set. Each background row
// gets exact Shapley values by tree-path enumeration; results are averaged.
class TreeShapExplainer {
 public:
  TreeShapExplainer(TreeEnsemble model, FeatureMatrix background, std::string background_source,
                    std::uint64_t seed = 0);

  // Background = min(size, n) rows of `train` sampled with the seed.
  static TreeShapExplainer from_training(TreeEnsemble model, const FeatureMatrix& train,
                                         std::size_t size, std::uint64_t seed);

  Attribution explain(std::span<const double> row) const;
  AttributionSet explain(const FeatureMatrix& m, const std::string& split, Exec exec = Exec::kParallel) const;
  const FeatureMatrix& background() const { return background_; }
  double base_value() const { return base_; }

 private:
  TreeEnsemble model_;
  FeatureMatrix background_;
  std::string source_;
  std::uint64_t seed_;
  double base_ = 0.0;
};

// Interventional SHAP for a single instance against `background`.
Attribution shap_tree(const TreeEnsemble& model, std::span<const double> instance, const FeatureMatrix& background);

// Classical Shapley values from a value function over column subsets
// (bit j of the mask set = column j present). d <= 12.
inline constexpr std::size_t kMaxBruteForcePlayers = 12;
std::vector<double> brute_force_shapley(const std::function<double(std::uint32_t)>& value, std::size_t d);

struct GlobalShapReport {
  ImportanceVector importance;  // mean |phi| per column
  std::size_t n_instances = 0;
};

GlobalShapReport shap_global(const AttributionSet& attributions);

}  // namespace ppmx
