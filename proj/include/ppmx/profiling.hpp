#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ppmx/event_log.hpp"
#include "ppmx/feature_matrix.hpp"
#include "ppmx/prefixing.hpp"

namespace ppmx {

inline constexpr std::array<double, 5> kProfileQuantiles = {0.05, 0.25, 0.50, 0.75, 0.95};
inline constexpr std::size_t kHistogramBins = 20;
inline constexpr std::size_t kTopValues = 5;

struct NumericSummary {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double std = 0.0;  // population
  std::array<double, 5> quantiles{};
  std::array<std::size_t, kHistogramBins> histogram{};  // equal width over [min, max]
};

// Fractions are over all rows, missing ones included.
struct ColumnProfile {
  std::string name;
  DType kind = DType::kNumeric;
  std::size_t n = 0;
  double missing_fraction = 0.0;
  double zero_fraction = 0.0;
  std::size_t distinct_count = 0;
  bool constant = false;  // distinct_count == 1
  std::optional<NumericSummary> numeric;
  std::vector<std::pair<std::string, std::size_t>> top_values;  // count desc, then value asc
};

struct ProfileReport {
  std::string subject;
  std::size_t n_rows = 0;
  std::vector<ColumnProfile> columns;
};

ColumnProfile profile_numeric(std::string name, std::span<const double> values);  // NaN = missing
ColumnProfile profile_categorical(std::string name, std::span<const std::optional<std::string>> values);

ProfileReport profile(const FeatureMatrix& m);

// Raw attributes ahead of encoding: dynamic attributes (activity included)
// over every event of the prefixes, static attributes once per prefix.
ProfileReport profile_prefixes(std::span<const PrefixTrace> prefixes, const Schema& schema);

}  // namespace ppmx
