#include "ppmx/profiling.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ppmx/error.hpp"
#include "ppmx/text.hpp"

namespace ppmx {

namespace {

double quantile_sorted(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

template <typename Key>
std::vector<std::pair<Key, std::size_t>> top_counts(const std::map<Key, std::size_t>& counts) {
  std::vector<std::pair<Key, std::size_t>> v(counts.begin(), counts.end());
  std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  if (v.size() > kTopValues) v.resize(kTopValues);
  return v;
}

}  // namespace

ColumnProfile profile_numeric(std::string name, std::span<const double> values) {
  ColumnProfile p;
  p.name = std::move(name);
  p.kind = DType::kNumeric;
  p.n = values.size();
  std::vector<double> present;
  std::size_t zeros = 0;
  std::map<double, std::size_t> counts;
  for (double v : values) {
    if (std::isnan(v)) continue;
    present.push_back(v);
    zeros += v == 0.0;
    ++counts[v == 0.0 ? 0.0 : v];
  }
  if (p.n > 0) {
    p.missing_fraction = static_cast<double>(p.n - present.size()) / static_cast<double>(p.n);
    p.zero_fraction = static_cast<double>(zeros) / static_cast<double>(p.n);
  }
  p.distinct_count = counts.size();
  p.constant = p.distinct_count == 1;
  for (const auto& [v, c] : top_counts(counts)) p.top_values.emplace_back(format_double(v), c);
  if (present.empty()) return p;

  NumericSummary s;
  std::sort(present.begin(), present.end());
  s.min = present.front();
  s.max = present.back();
  double sum = 0.0;
  for (double v : present) sum += v;
  s.mean = sum / static_cast<double>(present.size());
  double ss = 0.0;
  for (double v : present) ss += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(ss / static_cast<double>(present.size()));
  for (std::size_t i = 0; i < kProfileQuantiles.size(); ++i) s.quantiles[i] = quantile_sorted(present, kProfileQuantiles[i]);
  const double width = (s.max - s.min) / static_cast<double>(kHistogramBins);
  for (double v : present) {
    std::size_t bin = 0;
    if (width > 0) bin = std::min(kHistogramBins - 1, static_cast<std::size_t>((v - s.min) / width));
    ++s.histogram[bin];
  }
  p.numeric = s;
  return p;
}

ColumnProfile profile_categorical(std::string name, std::span<const std::optional<std::string>> values) {
  ColumnProfile p;
  p.name = std::move(name);
  p.kind = DType::kCategorical;
  p.n = values.size();
  std::map<std::string, std::size_t> counts;
  std::size_t missing = 0;
  for (const auto& v : values) {
    if (!v) {
      ++missing;
      continue;
    }
    ++counts[*v];
  }
  if (p.n > 0) p.missing_fraction = static_cast<double>(missing) / static_cast<double>(p.n);
  p.distinct_count = counts.size();
  p.constant = p.distinct_count == 1;
  p.top_values = top_counts(counts);
  return p;
}

ProfileReport profile(const FeatureMatrix& m) {
  if (m.empty()) throw_data("EmptyMatrix", "cannot profile an empty matrix");
  ProfileReport r;
  r.subject = "encoded";
  r.n_rows = m.n_rows();
  r.columns.resize(m.n_cols());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::size_t c = 0; c < m.n_cols(); ++c) {
    const auto col = m.column(c);
    r.columns[c] = profile_numeric(m.columns()[c].column_name, col);
  }
  return r;
}

ProfileReport profile_prefixes(std::span<const PrefixTrace> prefixes, const Schema& schema) {
  if (prefixes.empty()) throw_data("EmptyBucket", "cannot profile an empty bucket");
  ProfileReport r;
  r.subject = "raw";
  r.n_rows = prefixes.size();

  auto numeric_of = [](const Value* v) {
    if (!v) return std::nan("");
    auto d = as_number(*v);
    return d ? *d : std::nan("");
  };
  auto category_of = [](const Value* v) -> std::optional<std::string> {
    if (!v) return std::nullopt;
    const std::string* s = as_category(*v);
    return s ? std::optional<std::string>(*s) : std::nullopt;
  };

  {
    std::vector<std::optional<std::string>> acts;
    for (const auto& p : prefixes)
      for (const auto& e : p.events()) acts.emplace_back(e.activity);
    r.columns.push_back(profile_categorical(schema.activity, acts));
  }
  for (const auto& a : schema.attributes) {
    std::vector<double> nums;
    std::vector<std::optional<std::string>> cats;
    auto take = [&](const Value* v) {
      if (a.dtype == DType::kNumeric) nums.push_back(numeric_of(v));
      else cats.push_back(category_of(v));
    };
    for (const auto& p : prefixes) {
      if (a.scope == Scope::kStatic) {
        auto it = p.static_payload().find(a.name);
        take(it == p.static_payload().end() ? nullptr : &it->second);
      } else {
        for (const auto& e : p.events()) {
          auto it = e.payload.find(a.name);
          take(it == e.payload.end() ? nullptr : &it->second);
        }
      }
    }
    r.columns.push_back(a.dtype == DType::kNumeric ? profile_numeric(a.name, nums) : profile_categorical(a.name, cats));
  }
  return r;
}

}  // namespace ppmx
