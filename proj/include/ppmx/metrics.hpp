#pragma once

#include <cmath>
#include <optional>
#include <span>

namespace ppmx {

// Area under the ROC curve; ties in score count one half. Equal to the
// trapezoidal area over all score thresholds. nullopt when only one class is
// present.
std::optional<double> roc_auc(std::span<const double> scores, std::span<const int> labels);

// Fraction of rows where (margin > 0) matches the label.
double accuracy_from_margin(std::span<const double> margins, std::span<const int> labels);

struct EvalReport {
  std::size_t n_rows = 0;
  std::size_t n_positive = 0;
  std::optional<double> auc;
  double accuracy = 0.0;
  double log_loss = 0.0;
};

EvalReport evaluate_margins(std::span<const double> margins, std::span<const int> labels);

inline double sigmoid(double z) {
  return z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

// log(1 + e^z) without overflow.
double softplus(double z);

}  // namespace ppmx
