#include "ppmx/importance.hpp"

#include <algorithm>
#include <numeric>

#include "ppmx/error.hpp"

namespace ppmx {

std::vector<std::size_t> ImportanceVector::top_k(std::size_t k) const {
  return {ranking.begin(), ranking.begin() + static_cast<std::ptrdiff_t>(std::min(k, ranking.size()))};
}

std::vector<std::string> ImportanceVector::top_k_names(std::size_t k) const {
  std::vector<std::string> out;
  for (std::size_t i : top_k(k)) out.push_back(columns[i]);
  return out;
}

double ImportanceVector::score_of(const std::string& column) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == column) return scores[i];
  throw_data("UnknownColumn", "importance vector has no column '" + column + "'");
}

ImportanceVector make_importance(std::string criterion, std::vector<std::string> columns, std::vector<double> scores,
                                 std::vector<int> signs) {
  if (columns.size() != scores.size()) throw_data("ShapeMismatch", "importance columns and scores differ");
  ImportanceVector iv;
  iv.criterion = std::move(criterion);
  iv.columns = std::move(columns);
  iv.scores = std::move(scores);
  iv.signs = std::move(signs);
  iv.ranking.resize(iv.scores.size());
  std::iota(iv.ranking.begin(), iv.ranking.end(), std::size_t{0});
  std::stable_sort(iv.ranking.begin(), iv.ranking.end(),
                   [&](std::size_t a, std::size_t b) { return iv.scores[a] > iv.scores[b]; });
  return iv;
}

ImportanceVector lr_coefficients(const LinearModel& model) {
  std::vector<double> scores;
  std::vector<int> signs;
  for (double w : model.weights) {
    scores.push_back(std::abs(w));
    signs.push_back(w > 0 ? 1 : (w < 0 ? -1 : 0));
  }
  return make_importance("lr_coef", model.column_names, std::move(scores), std::move(signs));
}

const char* to_string(GbtCriterion c) {
  switch (c) {
    case GbtCriterion::kWeight: return "weight";
    case GbtCriterion::kGain: return "gain";
    case GbtCriterion::kCover: return "cover";
    case GbtCriterion::kTotalGain: return "total_gain";
    case GbtCriterion::kTotalCover: return "total_cover";
  }
  return "?";
}

GbtCriterion parse_gbt_criterion(const std::string& text) {
  for (GbtCriterion c : kAllGbtCriteria)
    if (text == to_string(c)) return c;
  throw_config("BadCriterion", "unknown importance criterion '" + text + "'");
}

ImportanceVector gbt_importance(const TreeEnsemble& model, GbtCriterion criterion) {
  const std::size_t d = model.column_names.size();
  std::vector<double> weight(d, 0.0), gain(d, 0.0), cover(d, 0.0);
  for (const auto& tree : model.trees) {
    for (const auto& node : tree.nodes) {
      if (node.is_leaf()) continue;
      const auto f = static_cast<std::size_t>(node.feature);
      weight[f] += 1.0;
      gain[f] += node.gain;
      cover[f] += node.cover;
    }
  }
  std::vector<double> scores(d, 0.0);
  for (std::size_t f = 0; f < d; ++f) {
    switch (criterion) {
      case GbtCriterion::kWeight: scores[f] = weight[f]; break;
      case GbtCriterion::kTotalGain: scores[f] = gain[f]; break;
      case GbtCriterion::kTotalCover: scores[f] = cover[f]; break;
      case GbtCriterion::kGain: scores[f] = weight[f] > 0 ? gain[f] / weight[f] : 0.0; break;
      case GbtCriterion::kCover: scores[f] = weight[f] > 0 ? cover[f] / weight[f] : 0.0; break;
    }
  }
  return make_importance(std::string("gbt_") + to_string(criterion), model.column_names, std::move(scores));
}

}  // namespace ppmx
