#include "ppmx/shap.hpp"

#include <cmath>

#include "ppmx/error.hpp"
#include "ppmx/kernels.hpp"
#include "ppmx/rng.hpp"

namespace ppmx {

LinearShapExplainer::LinearShapExplainer(LinearModel model, const FeatureMatrix& background,
                                         std::string background_source)
    : model_(std::move(model)), source_(std::move(background_source)) {
  const FeatureMatrix aligned = background.select_columns(model_.column_names);
  if (aligned.empty()) throw_explanation("EmptyBackground", "linear SHAP needs background rows");
  means_.assign(aligned.n_cols(), 0.0);
  for (std::size_t r = 0; r < aligned.n_rows(); ++r)
    for (std::size_t c = 0; c < aligned.n_cols(); ++c) means_[c] += model_.scale(c, aligned.at(r, c));
  for (double& v : means_) v /= static_cast<double>(aligned.n_rows());
}

LinearShapExplainer::LinearShapExplainer(LinearModel model, std::vector<double> scaled_means,
                                         std::string background_source)
    : model_(std::move(model)), means_(std::move(scaled_means)), source_(std::move(background_source)) {
  if (means_.size() != model_.weights.size()) throw_explanation("ColumnMismatch", "means do not match the model");
}

Attribution LinearShapExplainer::explain(std::span<const double> raw_row) const {
  Attribution a;
  a.base = model_.intercept;
  a.output = model_.intercept;
  a.phi.resize(model_.weights.size());
  for (std::size_t j = 0; j < model_.weights.size(); ++j) {
    const double w = model_.weights[j];
    a.phi[j] = w * (model_.scale(j, raw_row[j]) - means_[j]);
    a.base += w * means_[j];
    a.output += w * model_.scale(j, raw_row[j]);
  }
  return a;
}

AttributionSet LinearShapExplainer::explain(const FeatureMatrix& m, const std::string& split) const {
  const FeatureMatrix aligned = m.select_columns(model_.column_names);
  AttributionSet out;
  out.columns = model_.column_names;
  out.rows = aligned.rows();
  out.feature_values = aligned.values();
  out.method = "linear";
  out.background_source = source_;
  out.explained_split = split;
  for (std::size_t r = 0; r < aligned.n_rows(); ++r) out.attributions.push_back(explain(aligned.row(r)));
  return out;
}

TreeShapExplainer::TreeShapExplainer(TreeEnsemble model, FeatureMatrix background, std::string background_source,
                                     std::uint64_t seed)
    : model_(std::move(model)), source_(std::move(background_source)), seed_(seed) {
  if (background.empty()) throw_explanation("EmptyBackground", "tree SHAP needs background rows");
  background_ = background.select_columns(model_.column_names);
  for (std::size_t r = 0; r < background_.n_rows(); ++r) base_ += model_.margin(background_.row(r));
  base_ /= static_cast<double>(background_.n_rows());
}

TreeShapExplainer TreeShapExplainer::from_training(TreeEnsemble model, const FeatureMatrix& train, std::size_t size,
                                                   std::uint64_t seed) {
  if (train.empty() || size == 0) throw_explanation("EmptyBackground", "tree SHAP needs background rows");
  Rng rng = make_rng(seed, 0x736861705f6267ULL);
  const auto idx = sample_indices(train.n_rows(), size, rng);
  return TreeShapExplainer(std::move(model), train.select_rows(idx), "train", seed);
}

Attribution TreeShapExplainer::explain(std::span<const double> row) const {
  return shap_tree(model_, row, background_);
}

AttributionSet TreeShapExplainer::explain(const FeatureMatrix& m, const std::string& split, Exec exec) const {
  const FeatureMatrix aligned = m.select_columns(model_.column_names);
  const auto phi = exec == Exec::kSerial ? kernels::serial::tree_shap(model_, aligned, background_)
                                         : kernels::parallel::tree_shap(model_, aligned, background_);
  const std::size_t d = aligned.n_cols();
  AttributionSet out;
  out.columns = model_.column_names;
  out.rows = aligned.rows();
  out.feature_values = aligned.values();
  out.method = "tree_interventional";
  out.background_source = source_;
  out.explained_split = split;
  out.background_size = background_.n_rows();
  out.seed = seed_;
  for (std::size_t r = 0; r < aligned.n_rows(); ++r) {
    Attribution a;
    a.phi.assign(phi.begin() + static_cast<std::ptrdiff_t>(r * d), phi.begin() + static_cast<std::ptrdiff_t>((r + 1) * d));
    a.base = base_;
    a.output = model_.margin(aligned.row(r));
    out.attributions.push_back(std::move(a));
  }
  return out;
}

Attribution shap_tree(const TreeEnsemble& model, std::span<const double> instance, const FeatureMatrix& background) {
  if (background.empty()) throw_explanation("EmptyBackground", "tree SHAP needs background rows");
  const std::size_t d = model.column_names.size();
  if (instance.size() != d) throw_explanation("ColumnMismatch", "instance width differs from the model");
  std::vector<RowId> ids{{"instance", 0}};
  FeatureMatrix one(background.columns(), ids, std::vector<double>(instance.begin(), instance.end()), {0});
  Attribution a;
  a.phi = kernels::serial::tree_shap(model, one, background);
  for (std::size_t r = 0; r < background.n_rows(); ++r) a.base += model.margin(background.row(r));
  a.base /= static_cast<double>(background.n_rows());
  a.output = model.margin(instance);
  return a;
}

std::vector<double> brute_force_shapley(const std::function<double(std::uint32_t)>& value, std::size_t d) {
  if (d > kMaxBruteForcePlayers) throw_explanation("TooManyPlayers", "brute-force Shapley supports at most 12 columns");
  std::vector<double> fact(d + 1, 1.0);
  for (std::size_t i = 1; i <= d; ++i) fact[i] = fact[i - 1] * static_cast<double>(i);
  const std::uint32_t full = d == 0 ? 0u : (1u << d);
  std::vector<double> v(full == 0 ? 1 : full);
  for (std::uint32_t mask = 0; mask < v.size(); ++mask) v[mask] = value(mask);
  std::vector<double> phi(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    const std::uint32_t bit = 1u << j;
    for (std::uint32_t mask = 0; mask < full; ++mask) {
      if (mask & bit) continue;
      const auto s = static_cast<std::size_t>(__builtin_popcount(mask));
      phi[j] += fact[s] * fact[d - s - 1] / fact[d] * (v[mask | bit] - v[mask]);
    }
  }
  return phi;
}

GlobalShapReport shap_global(const AttributionSet& set) {
  if (set.attributions.empty()) throw_explanation("NoAttributions", "global SHAP needs at least one attribution");
  const std::size_t d = set.columns.size();
  std::vector<double> mean_abs(d, 0.0);
  for (const auto& a : set.attributions)
    for (std::size_t j = 0; j < d; ++j) mean_abs[j] += std::abs(a.phi[j]);
  for (double& v : mean_abs) v /= static_cast<double>(set.attributions.size());
  GlobalShapReport r;
  r.importance = make_importance("shap", set.columns, std::move(mean_abs));
  r.n_instances = set.attributions.size();
  return r;
}

}  // namespace ppmx
