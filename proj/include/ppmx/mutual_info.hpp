#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ppmx/feature_matrix.hpp"
#include "ppmx/importance.hpp"

namespace ppmx {

inline constexpr std::size_t kDefaultMiBins = 10;
inline constexpr std::size_t kDefaultTopK = 5;

// Codes 0..B-1. Columns with at most `bins` distinct values keep one code per
// value; otherwise quantile edges are used and a value equal to an edge goes
// to the upper bin. NaN gets its own trailing code.
std::vector<int> discretize(std::span<const double> values, std::size_t bins = kDefaultMiBins);

double entropy(std::span<const int> codes);
double mutual_information(std::span<const int> a, std::span<const int> b);
// I(a; b) / min(H(a), H(b)); 0 when either entropy is 0.
double normalized_mutual_info(std::span<const int> a, std::span<const int> b);

double nmi_with_label(std::span<const double> values, std::span<const int> labels, std::size_t bins = kDefaultMiBins);

struct MutualInfoReport {
  std::size_t bins = kDefaultMiBins;
  std::size_t top_k = kDefaultTopK;
  ImportanceVector scores;  // criterion "mi"
  // Columns scored for diagnosis only (never model inputs).
  std::vector<std::string> extra_columns;
  std::vector<double> extra_scores;
  std::vector<std::string> top_k_names() const { return scores.top_k_names(top_k); }
};

MutualInfoReport mutual_info(const FeatureMatrix& m, std::size_t bins = kDefaultMiBins,
                             std::size_t top_k = kDefaultTopK);

}  // namespace ppmx
