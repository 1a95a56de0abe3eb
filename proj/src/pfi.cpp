#include "ppmx/pfi.hpp"

#include <cmath>

#include "ppmx/error.hpp"
#include "ppmx/metrics.hpp"

namespace ppmx {

ImportanceVector PfiReport::importance() const { return make_importance("pfi", columns, mean); }

PfiReport permutation_importance(const kernels::MarginFn& margin, const FeatureMatrix& m, int n_iter,
                                 std::uint64_t seed, Exec exec) {
  if (n_iter < 1) throw_config("BadPfiConfig", "n_iter must be >= 1");
  std::vector<double> base_margins(m.n_rows());
  for (std::size_t r = 0; r < m.n_rows(); ++r) base_margins[r] = margin(m.row(r));
  const auto baseline = roc_auc(base_margins, m.labels());
  if (!baseline) throw_explanation("DegenerateMetric", "AUC is undefined on single-class data");

  const auto drops = exec == Exec::kSerial
                         ? kernels::serial::permutation_drops(margin, m, n_iter, seed, *baseline)
                         : kernels::parallel::permutation_drops(margin, m, n_iter, seed, *baseline);
  PfiReport report;
  report.columns = m.column_names();
  report.baseline_auc = *baseline;
  report.n_iter = n_iter;
  report.seed = seed;
  const auto iters = static_cast<std::size_t>(n_iter);
  for (std::size_t c = 0; c < m.n_cols(); ++c) {
    double sum = 0.0;
    for (std::size_t it = 0; it < iters; ++it) sum += drops[c * iters + it];
    const double mean = sum / static_cast<double>(n_iter);
    double ss = 0.0;
    for (std::size_t it = 0; it < iters; ++it) ss += (drops[c * iters + it] - mean) * (drops[c * iters + it] - mean);
    report.mean.push_back(mean);
    report.stddev.push_back(std::sqrt(ss / static_cast<double>(n_iter)));
  }
  return report;
}

PfiReport permutation_importance(const LinearModel& model, const FeatureMatrix& m, int n_iter, std::uint64_t seed,
                                 Exec exec) {
  const FeatureMatrix aligned = m.select_columns(model.column_names);
  return permutation_importance([&model](std::span<const double> row) { return model.margin(row); }, aligned,
                                n_iter, seed, exec);
}

PfiReport permutation_importance(const TreeEnsemble& model, const FeatureMatrix& m, int n_iter, std::uint64_t seed,
                                 Exec exec) {
  const FeatureMatrix aligned = m.select_columns(model.column_names);
  return permutation_importance([&model](std::span<const double> row) { return model.margin(row); }, aligned,
                                n_iter, seed, exec);
}

}  // namespace ppmx
