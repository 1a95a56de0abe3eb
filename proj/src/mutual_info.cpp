#include "ppmx/mutual_info.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "ppmx/error.hpp"

namespace ppmx {

std::vector<int> discretize(std::span<const double> values, std::size_t bins) {
  if (bins == 0) throw_config("BadBins", "bin count must be positive");
  std::vector<double> present;
  for (double v : values)
    if (!std::isnan(v)) present.push_back(v);
  std::sort(present.begin(), present.end());
  std::vector<double> edges;
  const std::set<double> distinct(present.begin(), present.end());
  const bool by_value = distinct.size() <= bins;
  if (by_value) {
    edges.assign(distinct.begin(), distinct.end());
  } else {
    for (std::size_t b = 1; b < bins; ++b) {
      const double pos = static_cast<double>(b) / static_cast<double>(bins) * static_cast<double>(present.size() - 1);
      const auto lo = static_cast<std::size_t>(std::floor(pos));
      const std::size_t hi = std::min(lo + 1, present.size() - 1);
      const double q = present[lo] + (present[hi] - present[lo]) * (pos - static_cast<double>(lo));
      if (edges.empty() || q > edges.back()) edges.push_back(q);
    }
  }
  const int nan_code = static_cast<int>(by_value ? edges.size() : edges.size() + 1);
  std::vector<int> out;
  out.reserve(values.size());
  for (double v : values) {
    if (std::isnan(v)) {
      out.push_back(nan_code);
    } else if (by_value) {
      out.push_back(static_cast<int>(std::lower_bound(edges.begin(), edges.end(), v) - edges.begin()));
    } else {
      out.push_back(static_cast<int>(std::upper_bound(edges.begin(), edges.end(), v) - edges.begin()));
    }
  }
  return out;
}

namespace {

template <typename Key>
double entropy_of(const std::map<Key, std::size_t>& counts, std::size_t n) {
  // Summing over sorted counts makes the result independent of how levels
  // are named or which side of a pair comes first.
  std::vector<std::size_t> sorted;
  sorted.reserve(counts.size());
  for (const auto& [k, c] : counts) sorted.push_back(c);
  std::sort(sorted.begin(), sorted.end());
  double h = 0.0;
  for (std::size_t c : sorted) {
    const double p = static_cast<double>(c) / static_cast<double>(n);
    h -= p * std::log(p);
  }
  return h;
}

struct Entropies {
  double a = 0.0;
  double b = 0.0;
  double joint = 0.0;
};

Entropies entropies(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw_data("ShapeMismatch", "mutual information inputs differ in length");
  if (a.empty()) return {};
  std::map<int, std::size_t> ca, cb;
  std::map<std::pair<int, int>, std::size_t> cj;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++ca[a[i]];
    ++cb[b[i]];
    ++cj[{a[i], b[i]}];
  }
  return {entropy_of(ca, a.size()), entropy_of(cb, a.size()), entropy_of(cj, a.size())};
}

}  // namespace

double entropy(std::span<const int> codes) {
  std::map<int, std::size_t> c;
  for (int v : codes) ++c[v];
  return codes.empty() ? 0.0 : entropy_of(c, codes.size());
}

double mutual_information(std::span<const int> a, std::span<const int> b) {
  const auto h = entropies(a, b);
  return std::max(0.0, h.a + h.b - h.joint);
}

double normalized_mutual_info(std::span<const int> a, std::span<const int> b) {
  const auto h = entropies(a, b);
  const double denom = std::min(h.a, h.b);
  if (denom <= 0.0) return 0.0;
  // When one side determines the other the joint counts equal that side's
  // counts, so both entropies are the same sum and the ratio is exactly 1.
  const double mi = std::max(0.0, h.a + h.b - h.joint);
  return std::clamp(mi / denom, 0.0, 1.0);
}

double nmi_with_label(std::span<const double> values, std::span<const int> labels, std::size_t bins) {
  const auto codes = discretize(values, bins);
  return normalized_mutual_info(codes, labels);
}

MutualInfoReport mutual_info(const FeatureMatrix& m, std::size_t bins, std::size_t top_k) {
  if (m.empty()) throw_data("EmptyMatrix", "mutual information needs rows");
  std::vector<double> scores(m.n_cols());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::size_t c = 0; c < m.n_cols(); ++c) {
    const auto col = m.column(c);
    scores[c] = nmi_with_label(col, m.labels(), bins);
  }
  MutualInfoReport r;
  r.bins = bins;
  r.top_k = top_k;
  r.scores = make_importance("mi", m.column_names(), std::move(scores));
  return r;
}

}  // namespace ppmx
