#include "ppmx/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "ppmx/error.hpp"

namespace ppmx {

double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

std::optional<double> roc_auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw_data("ShapeMismatch", "scores and labels differ in length");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  double pos_total = 0, neg_total = 0, numerator = 0, neg_below = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    double pos = 0, neg = 0;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      (labels[order[j]] ? pos : neg) += 1;
      ++j;
    }
    numerator += pos * neg_below + 0.5 * pos * neg;
    neg_below += neg;
    pos_total += pos;
    neg_total += neg;
    i = j;
  }
  if (pos_total == 0 || neg_total == 0) return std::nullopt;
  return numerator / (pos_total * neg_total);
}

double accuracy_from_margin(std::span<const double> margins, std::span<const int> labels) {
  if (margins.empty()) return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < margins.size(); ++i) hits += (margins[i] > 0.0) == (labels[i] != 0);
  return static_cast<double>(hits) / static_cast<double>(margins.size());
}

EvalReport evaluate_margins(std::span<const double> margins, std::span<const int> labels) {
  EvalReport r;
  r.n_rows = margins.size();
  for (int y : labels) r.n_positive += y != 0;
  r.auc = roc_auc(margins, labels);
  r.accuracy = accuracy_from_margin(margins, labels);
  double loss = 0.0;
  for (std::size_t i = 0; i < margins.size(); ++i) loss += softplus(margins[i]) - (labels[i] ? margins[i] : 0.0);
  r.log_loss = margins.empty() ? 0.0 : loss / static_cast<double>(margins.size());
  return r;
}

}  // namespace ppmx
