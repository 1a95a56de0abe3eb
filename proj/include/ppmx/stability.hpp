#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ppmx/correlation.hpp"
#include "ppmx/importance.hpp"
#include "ppmx/mutual_info.hpp"

namespace ppmx {

inline constexpr double kDefaultCollinearityThreshold = 0.9;

// Everything needed to compare two runs. `settings` is the canonical JSON of
// the run configuration with the seed and output location removed.
struct RunFingerprint {
  std::string settings;
  std::string settings_hash;
  std::uint64_t seed = 0;
  // bucket name -> method name -> importance
  std::map<std::string, std::map<std::string, ImportanceVector>> methods;
  std::vector<std::string> profile_refs;

  bool operator==(const RunFingerprint&) const = default;
};

struct PairMetrics {
  double jaccard = 0.0;
  double spearman = 0.0;
  std::optional<double> mean_abs_diff;  // over the shared top-k members; none when disjoint
  std::size_t n_shared = 0;
};

// Top-k metrics for two importance vectors over the same columns. Spearman
// is computed over the union of both top-k sets; a feature outside a top-k
// takes rank = number of columns.
PairMetrics compare_importance(const ImportanceVector& a, const ImportanceVector& b, std::size_t k = kDefaultTopK);

struct StabilityEntry {
  std::string bucket;
  std::string method;
  PairMetrics metrics;
};

struct StabilityReport {
  std::size_t k = kDefaultTopK;
  std::uint64_t seed_a = 0;
  std::uint64_t seed_b = 0;
  std::string settings_hash;
  std::vector<StabilityEntry> entries;  // ordered by (bucket, method)

  const StabilityEntry* find(const std::string& bucket, const std::string& method) const;
};

// Compares every (bucket, method) present in both runs. Throws ConfigError
// when settings differ and DataError when a shared method's columns differ.
StabilityReport compare_runs(const RunFingerprint& a, const RunFingerprint& b, std::size_t k = kDefaultTopK);

struct AgreementReport {
  std::string method;
  std::size_t k = kDefaultTopK;
  double overlap = 0.0;  // |top-k(method) ∩ top-k(MI)| / k
  std::vector<std::string> shared;
  std::optional<double> rank_correlation;  // Spearman over shared members, needs >= 2
};

AgreementReport agreement_with_mi(const ImportanceVector& iv, const MutualInfoReport& mi, std::size_t k = kDefaultTopK);

struct CollinearityFlag {
  std::string method;
  std::string column_a;
  std::string column_b;
  double abs_correlation = 0.0;
  double threshold = kDefaultCollinearityThreshold;
};

// Pairs within the top-k of `iv` with |corr| >= threshold, strongest first.
std::vector<CollinearityFlag> collinearity_scan(const ImportanceVector& iv, const CorrelationMatrix& corr,
                                                std::size_t k = kDefaultTopK,
                                                double threshold = kDefaultCollinearityThreshold);

}  // namespace ppmx
