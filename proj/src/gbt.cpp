#include "ppmx/gbt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ppmx/error.hpp"
#include "ppmx/kernels.hpp"
#include "ppmx/metrics.hpp"
#include "ppmx/rng.hpp"

namespace ppmx {

double RegressionTree::predict(std::span<const double> row) const {
  std::size_t id = 0;
  while (!nodes[id].is_leaf()) {
    const TreeNode& n = nodes[id];
    id = static_cast<std::size_t>(row[static_cast<std::size_t>(n.feature)] < n.threshold ? n.left : n.right);
  }
  return nodes[id].leaf_value;
}

int RegressionTree::depth() const {
  std::vector<int> depth(nodes.size(), 0);
  int best = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    best = std::max(best, depth[i]);
    if (!nodes[i].is_leaf()) {
      depth[static_cast<std::size_t>(nodes[i].left)] = depth[i] + 1;
      depth[static_cast<std::size_t>(nodes[i].right)] = depth[i] + 1;
    }
  }
  return best;
}

double TreeEnsemble::margin(std::span<const double> row) const {
  double z = base_score;
  for (const auto& t : trees) z += t.predict(row);
  return z;
}

std::vector<double> TreeEnsemble::margins(const FeatureMatrix& m) const {
  const FeatureMatrix aligned = m.column_names() == column_names ? m : m.select_columns(column_names);
  std::vector<double> out(aligned.n_rows());
  for (std::size_t r = 0; r < aligned.n_rows(); ++r) out[r] = margin(aligned.row(r));
  return out;
}

namespace {

double mean_log_loss(std::span<const double> margin, std::span<const int> y) {
  double loss = 0.0;
  for (std::size_t i = 0; i < margin.size(); ++i) loss += softplus(margin[i]) - (y[i] ? margin[i] : 0.0);
  return loss / static_cast<double>(margin.size());
}

}  // namespace

TreeEnsemble train_gbt(const FeatureMatrix& m, const GbtConfig& config, Exec exec) {
  if (m.n_rows() < 2) throw_training("TooFewRows", "boosting needs at least 2 rows");
  if (config.n_trees < 0 || config.max_depth < 0 || config.learning_rate <= 0 || config.l2 < 0 ||
      config.min_split_gain < 0 || config.min_child_cover < 0 || config.subsample <= 0 || config.subsample > 1 ||
      config.colsample <= 0 || config.colsample > 1)
    throw_config("BadTrainConfig", "invalid boosting settings");
  const std::size_t n = m.n_rows();
  const std::size_t d = m.n_cols();
  const auto& y = m.labels();
  std::size_t positives = 0;
  for (int v : y) positives += v != 0;
  if (positives == 0 || positives == n) throw_training("SingleClass", "training data holds one class");

  TreeEnsemble model;
  model.column_names = m.column_names();
  model.learning_rate = config.learning_rate;
  const double prior = static_cast<double>(positives) / static_cast<double>(n);
  model.base_score = std::log(prior / (1.0 - prior));

  std::vector<double> column_major(n * d);
  std::vector<std::vector<std::uint32_t>> sorted(d, std::vector<std::uint32_t>(n));
  for (std::size_t c = 0; c < d; ++c) {
    for (std::size_t r = 0; r < n; ++r) column_major[c * n + r] = m.at(r, c);
    auto& idx = sorted[c];
    std::iota(idx.begin(), idx.end(), 0u);
    const double* col = column_major.data() + c * n;
    std::stable_sort(idx.begin(), idx.end(), [col](std::uint32_t a, std::uint32_t b) { return col[a] < col[b]; });
  }

  std::vector<double> margin(n, model.base_score), grad(n), hess(n);
  std::vector<int> node_of_row(n);
  std::vector<int> tree_node_of_row(n);
  std::vector<unsigned char> allowed(d, 1);
  Rng rng = make_rng(config.seed, 0x6762745f726e67ULL);

  for (int round = 0; round < config.n_trees; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      const double p = sigmoid(margin[i]);
      grad[i] = p - (y[i] ? 1.0 : 0.0);
      hess[i] = p * (1.0 - p);
    }
    std::vector<unsigned char> in_sample(n, 1);
    if (config.subsample < 1.0)
      for (std::size_t i = 0; i < n; ++i) in_sample[i] = bernoulli(rng, config.subsample) ? 1 : 0;
    if (config.colsample < 1.0) {
      const std::size_t keep = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(config.colsample * d)));
      std::fill(allowed.begin(), allowed.end(), 0);
      for (std::size_t c : sample_indices(d, keep, rng)) allowed[c] = 1;
    }

    RegressionTree tree;
    TreeNode root;
    double g0 = 0.0, h0 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      tree_node_of_row[i] = in_sample[i] ? 0 : -1;
      if (in_sample[i]) {
        g0 += grad[i];
        h0 += hess[i];
      }
    }
    root.cover = h0;
    tree.nodes.push_back(root);
    std::vector<double> node_g{g0}, node_h{h0};  // indexed by tree node id
    std::vector<int> open{0};

    for (int depth = 0; depth < config.max_depth && !open.empty(); ++depth) {
      std::vector<int> slot_of_node(tree.nodes.size(), -1);
      std::vector<double> slot_g, slot_h;
      for (std::size_t s = 0; s < open.size(); ++s) {
        slot_of_node[static_cast<std::size_t>(open[s])] = static_cast<int>(s);
        slot_g.push_back(node_g[static_cast<std::size_t>(open[s])]);
        slot_h.push_back(node_h[static_cast<std::size_t>(open[s])]);
      }
      for (std::size_t i = 0; i < n; ++i)
        node_of_row[i] = tree_node_of_row[i] < 0 ? -1 : slot_of_node[static_cast<std::size_t>(tree_node_of_row[i])];

      kernels::SplitSearchInput in;
      in.column_major = column_major;
      in.n_rows = n;
      in.n_cols = d;
      in.sorted_rows = &sorted;
      in.grad = grad;
      in.hess = hess;
      in.node_of_row = node_of_row;
      in.node_grad = slot_g;
      in.node_hess = slot_h;
      in.column_allowed = allowed;
      in.l2 = config.l2;
      in.min_split_gain = config.min_split_gain;
      in.min_child_cover = config.min_child_cover;
      const auto best = exec == Exec::kSerial ? kernels::serial::find_best_splits(in)
                                              : kernels::parallel::find_best_splits(in);

      std::vector<int> next_open;
      for (std::size_t s = 0; s < open.size(); ++s) {
        if (!best[s].valid()) continue;
        const int id = open[s];
        const int left = static_cast<int>(tree.nodes.size());
        const int right = left + 1;
        TreeNode& parent = tree.nodes[static_cast<std::size_t>(id)];
        parent.feature = best[s].feature;
        parent.threshold = best[s].threshold;
        parent.gain = best[s].gain;
        parent.left = left;
        parent.right = right;
        const double gl = best[s].left_grad, hl = best[s].left_hess;
        const double gr = node_g[static_cast<std::size_t>(id)] - gl;
        const double hr = node_h[static_cast<std::size_t>(id)] - hl;
        TreeNode l, r;
        l.cover = hl;
        r.cover = hr;
        tree.nodes.push_back(l);
        tree.nodes.push_back(r);
        node_g.push_back(gl);
        node_g.push_back(gr);
        node_h.push_back(hl);
        node_h.push_back(hr);
        next_open.push_back(left);
        next_open.push_back(right);
      }
      for (std::size_t i = 0; i < n; ++i) {
        const int id = tree_node_of_row[i];
        if (id < 0) continue;
        const TreeNode& node = tree.nodes[static_cast<std::size_t>(id)];
        if (node.is_leaf()) continue;
        tree_node_of_row[i] = column_major[static_cast<std::size_t>(node.feature) * n + i] < node.threshold
                                  ? node.left
                                  : node.right;
      }
      open = std::move(next_open);
    }

    for (std::size_t id = 0; id < tree.nodes.size(); ++id) {
      TreeNode& node = tree.nodes[id];
      if (node.is_leaf()) node.leaf_value = -node_g[id] / (node_h[id] + config.l2) * config.learning_rate;
    }
    for (std::size_t i = 0; i < n; ++i) margin[i] += tree.predict(m.row(i));
    model.trees.push_back(std::move(tree));
    model.train_loss.push_back(mean_log_loss(margin, y));
  }
  return model;
}

}  // namespace ppmx
