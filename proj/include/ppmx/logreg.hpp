#pragma once

#include <span>
#include <string>
#include <vector>

#include "ppmx/feature_matrix.hpp"
#include "ppmx/metrics.hpp"

namespace ppmx {

struct LogRegConfig {
  double l2 = 1.0;
  double tolerance = 1e-8;
  int max_iterations = 200;
};

// L2-regularized logistic regression fitted on min-max scaled features.
// Weights live in the scaled space; margin() scales raw rows itself.
struct LinearModel {
  std::vector<std::string> column_names;
  std::vector<double> weights;
  double intercept = 0.0;
  std::vector<double> scale_min;
  std::vector<double> scale_range;  // 0 marks a column constant at fit time

  int iterations = 0;
  double final_loss = 0.0;
  bool converged = false;

  double scale(std::size_t col, double raw) const {
    return scale_range[col] > 0.0 ? (raw - scale_min[col]) / scale_range[col] : 0.0;
  }
  double margin(std::span<const double> raw_row) const;
  std::vector<double> margins(const FeatureMatrix& m) const;

  bool operator==(const LinearModel&) const = default;
};

// Objective: sum_i [softplus(z_i) - y_i z_i] + l2/2 ||w||^2, intercept not
// penalized. Minimized with damped Newton steps until the gradient's max-norm
// drops below the tolerance.
LinearModel train_logreg(const FeatureMatrix& m, const LogRegConfig& config);

// Objective and gradient on an already-scaled row-major design. The gradient
// has d+1 entries, the intercept last.
double logreg_objective(std::span<const double> x_scaled, std::size_t n, std::size_t d, std::span<const int> y,
                        std::span<const double> w, double b, double l2);
std::vector<double> logreg_gradient(std::span<const double> x_scaled, std::size_t n, std::size_t d,
                                    std::span<const int> y, std::span<const double> w, double b, double l2);

}  // namespace ppmx
