#include "kernels_common.hpp"

namespace ppmx::kernels::serial {

std::vector<double> pearson(std::span<const std::vector<double>> columns) {
  const detail::CenteredColumns cc = detail::center(columns);
  const std::size_t d = columns.size();
  std::vector<double> out(d * d, 0.0);
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = a; b < d; ++b) {
      const double r = detail::pearson_pair(cc, a, b);
      out[a * d + b] = r;
      out[b * d + a] = r;
    }
  }
  return out;
}

std::vector<SplitCandidate> find_best_splits(const SplitSearchInput& in) {
  detail::check_split_input(in);
  std::vector<std::vector<SplitCandidate>> per_column(in.n_cols);
  for (std::size_t c = 0; c < in.n_cols; ++c) detail::scan_column(in, c, per_column[c]);
  std::vector<SplitCandidate> best(in.node_grad.size());
  detail::reduce_splits(per_column, best);
  return best;
}

std::vector<double> permutation_drops(const MarginFn& margin, const FeatureMatrix& m, int n_iter,
                                      std::uint64_t seed, double baseline_auc) {
  const std::size_t iters = static_cast<std::size_t>(n_iter);
  std::vector<double> drops(m.n_cols() * iters, 0.0);
  std::vector<double> work = m.values();
  for (std::size_t c = 0; c < m.n_cols(); ++c)
    detail::permute_column(margin, m, work, c, n_iter, seed, baseline_auc,
                           std::span<double>(drops.data() + c * iters, iters));
  return drops;
}

std::vector<double> tree_shap(const TreeEnsemble& model, const FeatureMatrix& instances,
                              const FeatureMatrix& background) {
  detail::check_shap_input(model, instances, background);
  const std::size_t d = instances.n_cols();
  std::vector<double> phi(instances.n_rows() * d, 0.0);
  detail::InterventionalWalker walker(d, detail::max_tree_depth(model));
  for (std::size_t i = 0; i < instances.n_rows(); ++i)
    detail::shap_instance(model, instances, background, i, walker, std::span<double>(phi.data() + i * d, d));
  return phi;
}

}  // namespace ppmx::kernels::serial
