#include "ppmx/stability.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ppmx/error.hpp"

namespace ppmx {

namespace {

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = a.size();
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa <= 0.0 || sbb <= 0.0) return a == b ? 1.0 : 0.0;
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

// Average ranks (1-based) so ties in the input get equal ranks.
std::vector<double> average_ranks(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return v[x] < v[y]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = r;
    i = j + 1;
  }
  return ranks;
}

std::map<std::string, std::size_t> top_positions(const ImportanceVector& iv, std::size_t k) {
  std::map<std::string, std::size_t> pos;
  const auto names = iv.top_k_names(k);
  for (std::size_t i = 0; i < names.size(); ++i) pos.emplace(names[i], i + 1);
  return pos;
}

}  // namespace

PairMetrics compare_importance(const ImportanceVector& a, const ImportanceVector& b, std::size_t k) {
  const std::set<std::string> ua(a.columns.begin(), a.columns.end()), ub(b.columns.begin(), b.columns.end());
  if (ua != ub) throw_data("ColumnUniverseMismatch", "importance vectors cover different columns");
  const auto pa = top_positions(a, k), pb = top_positions(b, k);
  std::set<std::string> uni;
  for (const auto& [n, p] : pa) uni.insert(n);
  for (const auto& [n, p] : pb) uni.insert(n);

  PairMetrics m;
  std::vector<double> ra, rb;
  double diff = 0.0;
  const auto absent = static_cast<double>(ua.size());
  for (const auto& name : uni) {
    const auto ia = pa.find(name), ib = pb.find(name);
    ra.push_back(ia == pa.end() ? absent : static_cast<double>(ia->second));
    rb.push_back(ib == pb.end() ? absent : static_cast<double>(ib->second));
    if (ia != pa.end() && ib != pb.end()) {
      ++m.n_shared;
      diff += std::abs(a.score_of(name) - b.score_of(name));
    }
  }
  m.jaccard = uni.empty() ? 1.0 : static_cast<double>(m.n_shared) / static_cast<double>(uni.size());
  m.spearman = uni.empty() ? 1.0 : pearson(average_ranks(ra), average_ranks(rb));
  if (m.n_shared > 0) m.mean_abs_diff = diff / static_cast<double>(m.n_shared);
  return m;
}

const StabilityEntry* StabilityReport::find(const std::string& bucket, const std::string& method) const {
  for (const auto& e : entries)
    if (e.bucket == bucket && e.method == method) return &e;
  return nullptr;
}

StabilityReport compare_runs(const RunFingerprint& a, const RunFingerprint& b, std::size_t k) {
  if (a.settings != b.settings) throw_config("SettingsMismatch", "runs differ in more than the seed");
  StabilityReport r;
  r.k = k;
  r.seed_a = a.seed;
  r.seed_b = b.seed;
  r.settings_hash = a.settings_hash;
  for (const auto& [bucket, methods] : a.methods) {
    const auto other = b.methods.find(bucket);
    if (other == b.methods.end()) continue;
    for (const auto& [method, iv] : methods) {
      const auto ob = other->second.find(method);
      if (ob == other->second.end()) continue;
      r.entries.push_back({bucket, method, compare_importance(iv, ob->second, k)});
    }
  }
  return r;
}

AgreementReport agreement_with_mi(const ImportanceVector& iv, const MutualInfoReport& mi, std::size_t k) {
  AgreementReport r;
  r.method = iv.criterion;
  r.k = k;
  const auto pa = top_positions(iv, k), pb = top_positions(mi.scores, k);
  std::vector<double> ra, rb;
  for (const auto& name : iv.top_k_names(k)) {
    const auto ib = pb.find(name);
    if (ib == pb.end()) continue;
    r.shared.push_back(name);
    ra.push_back(static_cast<double>(pa.at(name)));
    rb.push_back(static_cast<double>(ib->second));
  }
  r.overlap = k == 0 ? 0.0 : static_cast<double>(r.shared.size()) / static_cast<double>(k);
  if (r.shared.size() >= 2) r.rank_correlation = pearson(average_ranks(ra), average_ranks(rb));
  return r;
}

std::vector<CollinearityFlag> collinearity_scan(const ImportanceVector& iv, const CorrelationMatrix& corr,
                                                std::size_t k, double threshold) {
  const auto top = iv.top_k_names(k);
  std::vector<CollinearityFlag> flags;
  for (std::size_t i = 0; i < top.size(); ++i) {
    for (std::size_t j = i + 1; j < top.size(); ++j) {
      const auto c = corr.between(top[i], top[j]);
      if (!c) throw_data("UnknownColumn", "correlation matrix lacks " + top[i] + " or " + top[j]);
      const double v = std::abs(*c);
      if (v >= threshold) flags.push_back({iv.criterion, top[i], top[j], v, threshold});
    }
  }
  std::stable_sort(flags.begin(), flags.end(),
                   [](const auto& x, const auto& y) { return x.abs_correlation > y.abs_correlation; });
  return flags;
}

}  // namespace ppmx
