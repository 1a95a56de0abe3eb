#pragma once

// Per-work-item bodies shared by the serial and OpenMP kernel drivers.

#include <algorithm>
#include <cmath>
#include <vector>

#include "ppmx/error.hpp"
#include "ppmx/kernels.hpp"
#include "ppmx/metrics.hpp"
#include "ppmx/rng.hpp"

namespace ppmx::kernels::detail {

struct CenteredColumns {
  std::vector<std::vector<double>> centered;
  std::vector<double> norm2;
  std::vector<bool> constant;
};

inline CenteredColumns center(std::span<const std::vector<double>> columns) {
  CenteredColumns out;
  for (const auto& col : columns) {
    double mean = 0.0;
    for (double v : col) mean += v;
    mean = col.empty() ? 0.0 : mean / static_cast<double>(col.size());
    std::vector<double> c(col.size());
    double ss = 0.0;
    bool constant = true;
    for (std::size_t i = 0; i < col.size(); ++i) {
      c[i] = col[i] - mean;
      ss += c[i] * c[i];
      constant = constant && col[i] == col[0];
    }
    out.centered.push_back(std::move(c));
    out.norm2.push_back(ss);
    out.constant.push_back(constant || ss == 0.0);
  }
  return out;
}

inline double pearson_pair(const CenteredColumns& cc, std::size_t a, std::size_t b) {
  if (cc.constant[a] || cc.constant[b]) return 0.0;
  if (a == b) return 1.0;
  const auto& x = cc.centered[a];
  const auto& y = cc.centered[b];
  double cov = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) cov += x[i] * y[i];
  return std::clamp(cov / std::sqrt(cc.norm2[a] * cc.norm2[b]), -1.0, 1.0);
}

// Best split of column `c` for every open node slot.
inline void scan_column(const SplitSearchInput& in, std::size_t c, std::vector<SplitCandidate>& best) {
  const std::size_t slots = in.node_grad.size();
  best.assign(slots, SplitCandidate{});
  if (!in.column_allowed.empty() && !in.column_allowed[c]) return;
  std::vector<double> gl(slots, 0.0), hl(slots, 0.0), last(slots, 0.0);
  std::vector<unsigned char> seen(slots, 0);
  const double* x = in.column_major.data() + c * in.n_rows;
  for (std::uint32_t row : (*in.sorted_rows)[c]) {
    const int s = in.node_of_row[row];
    if (s < 0) continue;
    const double v = x[row];
    if (seen[s] && v > last[s]) {
      const double g = in.node_grad[s], h = in.node_hess[s];
      const double gr = g - gl[s], hr = h - hl[s];
      if (hl[s] >= in.min_child_cover && hr >= in.min_child_cover) {
        const double gain = 0.5 * (gl[s] * gl[s] / (hl[s] + in.l2) + gr * gr / (hr + in.l2) -
                                   g * g / (h + in.l2)) -
                            in.min_split_gain;
        if (gain > best[s].gain) {
          double thr = 0.5 * (last[s] + v);
          if (!(thr > last[s])) thr = v;
          best[s] = {gain, static_cast<int>(c), thr, gl[s], hl[s]};
        }
      }
    }
    gl[s] += in.grad[row];
    hl[s] += in.hess[row];
    last[s] = v;
    seen[s] = 1;
  }
}

inline void reduce_splits(const std::vector<std::vector<SplitCandidate>>& per_column,
                          std::vector<SplitCandidate>& best) {
  for (const auto& col : per_column)
    for (std::size_t s = 0; s < best.size(); ++s)
      if (col[s].valid() && col[s].gain > best[s].gain) best[s] = col[s];
}

inline void check_split_input(const SplitSearchInput& in) {
  if (!in.sorted_rows || in.sorted_rows->size() != in.n_cols || in.column_major.size() != in.n_rows * in.n_cols)
    throw_training("BadSplitInput", "split search input has inconsistent shapes");
}

// Shuffles column c n_iter times and records the AUC drop of each shuffle.
// `work` is a private copy of the matrix values and is restored on return.
inline void permute_column(const MarginFn& margin, const FeatureMatrix& m, std::vector<double>& work,
                           std::size_t c, int n_iter, std::uint64_t seed, double baseline,
                           std::span<double> drops_out) {
  const std::size_t n = m.n_rows(), d = m.n_cols();
  std::vector<double> original = m.column(c);
  std::vector<double> shuffled = original;
  std::vector<double> margins(n);
  Rng rng = make_rng(seed, c);
  for (int it = 0; it < n_iter; ++it) {
    shuffled = original;
    shuffle(shuffled, rng);
    for (std::size_t r = 0; r < n; ++r) work[r * d + c] = shuffled[r];
    for (std::size_t r = 0; r < n; ++r) margins[r] = margin(std::span<const double>(work.data() + r * d, d));
    auto auc = roc_auc(margins, m.labels());
    drops_out[static_cast<std::size_t>(it)] = baseline - auc.value_or(0.5);
  }
  for (std::size_t r = 0; r < n; ++r) work[r * d + c] = original[r];
}

// Shapley weights w[a][b] = a! b! / (a + b + 1)!.
inline std::vector<std::vector<double>> shapley_weights(std::size_t max_players) {
  std::vector<std::vector<double>> w(max_players + 1, std::vector<double>(max_players + 1, 0.0));
  for (std::size_t a = 0; a <= max_players; ++a) {
    for (std::size_t b = 0; a + b <= max_players; ++b) {
      // 1 / ((a+b+1) * C(a+b, a))
      double binom = 1.0;
      for (std::size_t k = 1; k <= a; ++k) binom = binom * static_cast<double>(b + k) / static_cast<double>(k);
      w[a][b] = 1.0 / (static_cast<double>(a + b + 1) * binom);
    }
  }
  return w;
}

// Walks one tree for the (instance, background) pair. Features where both
// paths agree are not players; at a split where they disagree the feature
// joins the instance side (S_X) or the background side (S_Z).
class InterventionalWalker {
 public:
  InterventionalWalker(std::size_t n_cols, std::size_t max_depth)
      : side_(n_cols, 0), weights_(shapley_weights(max_depth + 1)) {}

  void run(const RegressionTree& tree, std::span<const double> x, std::span<const double> z, std::span<double> phi) {
    x_ = x;
    z_ = z;
    phi_ = phi;
    tree_ = &tree;
    recurse(0);
  }

 private:
  void recurse(int id) {
    const TreeNode& node = tree_->nodes[static_cast<std::size_t>(id)];
    if (node.is_leaf()) {
      const std::size_t nx = in_x_.size(), nz = in_z_.size();
      if (nx > 0) {
        const double wx = weights_[nx - 1][nz] * node.leaf_value;
        for (int f : in_x_) phi_[static_cast<std::size_t>(f)] += wx;
      }
      if (nz > 0) {
        const double wz = weights_[nx][nz - 1] * node.leaf_value;
        for (int f : in_z_) phi_[static_cast<std::size_t>(f)] -= wz;
      }
      return;
    }
    const std::size_t f = static_cast<std::size_t>(node.feature);
    const int x_child = x_[f] < node.threshold ? node.left : node.right;
    const int z_child = z_[f] < node.threshold ? node.left : node.right;
    if (x_child == z_child) return recurse(x_child);
    if (side_[f] == 1) return recurse(x_child);
    if (side_[f] == 2) return recurse(z_child);

    side_[f] = 1;
    in_x_.push_back(node.feature);
    recurse(x_child);
    in_x_.pop_back();

    side_[f] = 2;
    in_z_.push_back(node.feature);
    recurse(z_child);
    in_z_.pop_back();
    side_[f] = 0;
  }

  std::vector<unsigned char> side_;
  std::vector<std::vector<double>> weights_;
  std::vector<int> in_x_, in_z_;
  std::span<const double> x_, z_;
  std::span<double> phi_;
  const RegressionTree* tree_ = nullptr;
};

inline std::size_t max_tree_depth(const TreeEnsemble& model) {
  std::size_t depth = 0;
  for (const auto& t : model.trees) depth = std::max(depth, static_cast<std::size_t>(t.depth()));
  return depth;
}

inline void shap_instance(const TreeEnsemble& model, const FeatureMatrix& instances, const FeatureMatrix& background,
                          std::size_t i, InterventionalWalker& walker, std::span<double> phi) {
  std::fill(phi.begin(), phi.end(), 0.0);
  for (std::size_t b = 0; b < background.n_rows(); ++b)
    for (const auto& tree : model.trees) walker.run(tree, instances.row(i), background.row(b), phi);
  const double inv = 1.0 / static_cast<double>(background.n_rows());
  for (double& v : phi) v *= inv;
}

inline void check_shap_input(const TreeEnsemble& model, const FeatureMatrix& instances,
                             const FeatureMatrix& background) {
  if (background.n_rows() == 0) throw_explanation("EmptyBackground", "tree SHAP needs background rows");
  if (instances.n_cols() != model.column_names.size() || background.n_cols() != model.column_names.size())
    throw_explanation("ColumnMismatch", "instances and background must match the model's columns");
}

}  // namespace ppmx::kernels::detail
