#include "ppmx/logreg.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "ppmx/error.hpp"

namespace ppmx {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

double objective(const RowMatrix& z, const Eigen::VectorXd& y, const Eigen::VectorXd& theta, double l2) {
  const Eigen::Index d = theta.size() - 1;
  Eigen::VectorXd margin = z * theta;
  double loss = 0.0;
  for (Eigen::Index i = 0; i < margin.size(); ++i) loss += softplus(margin[i]) - y[i] * margin[i];
  return loss + 0.5 * l2 * theta.head(d).squaredNorm();
}

}  // namespace

double LinearModel::margin(std::span<const double> raw_row) const {
  double z = intercept;
  for (std::size_t j = 0; j < weights.size(); ++j) z += weights[j] * scale(j, raw_row[j]);
  return z;
}

std::vector<double> LinearModel::margins(const FeatureMatrix& m) const {
  const FeatureMatrix aligned = m.column_names() == column_names ? m : m.select_columns(column_names);
  std::vector<double> out(aligned.n_rows());
  for (std::size_t r = 0; r < aligned.n_rows(); ++r) out[r] = margin(aligned.row(r));
  return out;
}

double logreg_objective(std::span<const double> x_scaled, std::size_t n, std::size_t d, std::span<const int> y,
                        std::span<const double> w, double b, double l2) {
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double z = b;
    for (std::size_t j = 0; j < d; ++j) z += w[j] * x_scaled[i * d + j];
    loss += softplus(z) - (y[i] ? z : 0.0);
  }
  double reg = 0.0;
  for (double v : w) reg += v * v;
  return loss + 0.5 * l2 * reg;
}

std::vector<double> logreg_gradient(std::span<const double> x_scaled, std::size_t n, std::size_t d,
                                    std::span<const int> y, std::span<const double> w, double b, double l2) {
  std::vector<double> g(d + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double z = b;
    for (std::size_t j = 0; j < d; ++j) z += w[j] * x_scaled[i * d + j];
    const double resid = sigmoid(z) - (y[i] ? 1.0 : 0.0);
    for (std::size_t j = 0; j < d; ++j) g[j] += resid * x_scaled[i * d + j];
    g[d] += resid;
  }
  for (std::size_t j = 0; j < d; ++j) g[j] += l2 * w[j];
  return g;
}

LinearModel train_logreg(const FeatureMatrix& m, const LogRegConfig& config) {
  if (m.n_rows() < 2) throw_training("TooFewRows", "logistic regression needs at least 2 rows");
  std::size_t positives = 0;
  for (int y : m.labels()) positives += y != 0;
  if (positives == 0 || positives == m.n_rows()) throw_training("SingleClass", "training data holds one class");
  if (config.l2 < 0 || config.tolerance <= 0 || config.max_iterations < 1)
    throw_config("BadTrainConfig", "invalid logistic regression settings");

  const std::size_t n = m.n_rows();
  const std::size_t d = m.n_cols();
  LinearModel model;
  model.column_names = m.column_names();
  model.scale_min.assign(d, 0.0);
  model.scale_range.assign(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    double lo = m.at(0, j), hi = lo;
    for (std::size_t i = 1; i < n; ++i) {
      lo = std::min(lo, m.at(i, j));
      hi = std::max(hi, m.at(i, j));
    }
    model.scale_min[j] = lo;
    model.scale_range[j] = hi - lo;
  }

  // Design with a trailing column of ones for the intercept.
  RowMatrix z(n, d + 1);
  Eigen::VectorXd y(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) z(i, j) = model.scale(j, m.at(i, j));
    z(i, d) = 1.0;
    y[i] = m.labels()[i] ? 1.0 : 0.0;
  }
  Eigen::VectorXd ridge = Eigen::VectorXd::Constant(d + 1, config.l2);
  ridge[d] = 0.0;

  Eigen::VectorXd theta = Eigen::VectorXd::Zero(d + 1);
  double f = objective(z, y, theta, config.l2);
  int iter = 0;
  bool converged = false;
  for (; iter < config.max_iterations; ++iter) {
    Eigen::VectorXd margin = z * theta;
    Eigen::VectorXd resid(n), weight(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double p = sigmoid(margin[i]);
      resid[i] = p - y[i];
      weight[i] = p * (1.0 - p);
    }
    Eigen::VectorXd grad = z.transpose() * resid + ridge.cwiseProduct(theta);
    if (grad.lpNorm<Eigen::Infinity>() < config.tolerance) {
      converged = true;
      break;
    }
    Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(d + 1, d + 1);
    RowMatrix zw = weight.cwiseSqrt().asDiagonal() * z;
    hess.selfadjointView<Eigen::Lower>().rankUpdate(zw.transpose());
    hess = hess.selfadjointView<Eigen::Lower>();
    hess.diagonal() += ridge;
    // Keeps the intercept row solvable when the fit is nearly separable.
    hess.diagonal().array() += 1e-12;
    Eigen::VectorXd step = hess.ldlt().solve(grad);

    const double slope = grad.dot(step);
    double t = 1.0;
    double f_new = f;
    Eigen::VectorXd candidate = theta;
    for (int ls = 0; ls < 60; ++ls) {
      candidate = theta - t * step;
      f_new = objective(z, y, candidate, config.l2);
      if (f_new <= f - 1e-4 * t * slope) break;
      t *= 0.5;
    }
    if (!(f_new <= f)) {
      // No descent possible at machine precision.
      converged = grad.lpNorm<Eigen::Infinity>() < std::sqrt(config.tolerance);
      break;
    }
    theta = candidate;
    f = f_new;
  }

  model.weights.assign(theta.data(), theta.data() + d);
  model.intercept = theta[d];
  model.iterations = iter;
  model.final_loss = f;
  model.converged = converged;
  return model;
}

}  // namespace ppmx
