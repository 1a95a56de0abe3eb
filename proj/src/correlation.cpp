#include "ppmx/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>

#include "ppmx/error.hpp"
#include "ppmx/kernels.hpp"

namespace ppmx {

const char* to_string(CorrelationMethod m) { return m == CorrelationMethod::kPearson ? "pearson" : "cramers_v"; }

std::optional<double> CorrelationMatrix::between(const std::string& a, const std::string& b) const {
  std::optional<std::size_t> ia, ib;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == a) ia = i;
    if (columns[i] == b) ib = i;
  }
  if (!ia || !ib) return std::nullopt;
  return at(*ia, *ib);
}

CorrelationMatrix pearson_matrix(const FeatureMatrix& m, Exec exec) {
  if (m.n_rows() < 2) throw_data("TooFewRows", "Pearson correlation needs at least 2 rows");
  std::vector<std::vector<double>> cols(m.n_cols());
  for (std::size_t c = 0; c < m.n_cols(); ++c) {
    cols[c] = m.column(c);
    const auto [lo, hi] = std::minmax_element(cols[c].begin(), cols[c].end());
    const double min = *lo, range = *hi - *lo;
    for (double& v : cols[c]) v = range > 0 ? (v - min) / range : 0.0;
  }
  CorrelationMatrix out;
  out.method = CorrelationMethod::kPearson;
  out.columns = m.column_names();
  out.values = exec == Exec::kSerial ? kernels::serial::pearson(cols) : kernels::parallel::pearson(cols);
  for (const auto& c : cols) out.constant.push_back(std::all_of(c.begin(), c.end(), [&](double v) { return v == c[0]; }));
  return out;
}

double cramers_v(const std::vector<std::vector<double>>& table) {
  std::vector<double> row_sum, col_sum;
  const std::size_t cols = table.empty() ? 0 : table[0].size();
  col_sum.assign(cols, 0.0);
  double n = 0.0;
  for (const auto& row : table) {
    if (row.size() != cols) throw_data("ShapeMismatch", "ragged contingency table");
    double s = 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
      s += row[j];
      col_sum[j] += row[j];
    }
    row_sum.push_back(s);
    n += s;
  }
  std::size_t r = 0, c = 0;
  for (double s : row_sum) r += s > 0;
  for (double s : col_sum) c += s > 0;
  if (n <= 0 || std::min(r, c) <= 1) return 0.0;
  // Terms are summed in sorted order so that transposing the table gives
  // the same value bit for bit.
  std::vector<double> terms;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (row_sum[i] <= 0) continue;
    for (std::size_t j = 0; j < cols; ++j) {
      if (col_sum[j] <= 0) continue;
      const double expected = row_sum[i] * col_sum[j] / n;
      const double diff = table[i][j] - expected;
      terms.push_back(diff * diff / expected);
    }
  }
  std::sort(terms.begin(), terms.end());
  const double chi2 = std::accumulate(terms.begin(), terms.end(), 0.0);
  return std::min(1.0, std::sqrt(chi2 / (n * static_cast<double>(std::min(r, c) - 1))));
}

std::vector<std::vector<double>> contingency_table(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw_data("ShapeMismatch", "contingency inputs differ in length");
  int ra = 0, rb = 0;
  for (int v : a) ra = std::max(ra, v + 1);
  for (int v : b) rb = std::max(rb, v + 1);
  std::vector<std::vector<double>> t(static_cast<std::size_t>(ra), std::vector<double>(static_cast<std::size_t>(rb), 0.0));
  for (std::size_t i = 0; i < a.size(); ++i) t[static_cast<std::size_t>(a[i])][static_cast<std::size_t>(b[i])] += 1.0;
  return t;
}

namespace {

template <typename T>
std::vector<int> codes_of(std::span<const T> values) {
  std::map<T, int> index;
  for (const auto& v : values) index.emplace(v, 0);
  int next = 0;
  for (auto& [k, code] : index) code = next++;
  std::vector<int> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(index.at(v));
  return out;
}

}  // namespace

double cramers_v(std::span<const double> a, std::span<const double> b) {
  const auto ca = codes_of(a), cb = codes_of(b);
  return cramers_v(contingency_table(ca, cb));
}

double cramers_v(std::span<const std::string> a, std::span<const std::string> b) {
  const auto ca = codes_of(a), cb = codes_of(b);
  return cramers_v(contingency_table(ca, cb));
}

CorrelationMatrix cramers_v_matrix(const FeatureMatrix& m, std::size_t max_levels) {
  CorrelationMatrix out;
  out.method = CorrelationMethod::kCramersV;
  std::vector<std::vector<int>> codes;
  for (std::size_t c = 0; c < m.n_cols(); ++c) {
    const auto col = m.column(c);
    bool discrete = true;
    std::map<double, int> levels;
    for (double v : col) {
      if (std::isnan(v) || v != std::floor(v)) {
        discrete = false;
        break;
      }
      levels.emplace(v, 0);
      if (levels.size() > max_levels) {
        discrete = false;
        break;
      }
    }
    if (!discrete) continue;
    out.columns.push_back(m.columns()[c].column_name);
    out.constant.push_back(levels.size() <= 1);
    codes.push_back(codes_of(std::span<const double>(col)));
  }
  const std::size_t d = codes.size();
  out.values.assign(d * d, 0.0);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = a; b < d; ++b) {
      double v = 0.0;
      if (!out.constant[a] && !out.constant[b]) v = a == b ? 1.0 : cramers_v(contingency_table(codes[a], codes[b]));
      out.values[a * d + b] = v;
      out.values[b * d + a] = v;
    }
  }
  return out;
}

}  // namespace ppmx
