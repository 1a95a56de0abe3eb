#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ppmx/exec.hpp"
#include "ppmx/feature_matrix.hpp"

namespace ppmx {

enum class CorrelationMethod { kPearson, kCramersV };

const char* to_string(CorrelationMethod m);

// Symmetric matrix over `columns`. Pairs touching a constant column are 0
// and the column is flagged.
struct CorrelationMatrix {
  CorrelationMethod method = CorrelationMethod::kPearson;
  std::vector<std::string> columns;
  std::vector<double> values;  // row-major
  std::vector<bool> constant;

  std::size_t size() const { return columns.size(); }
  double at(std::size_t i, std::size_t j) const { return values[i * columns.size() + j]; }
  // Lookup by name; nullopt when either column is absent.
  std::optional<double> between(const std::string& a, const std::string& b) const;
};

// Pearson correlation of min-max normalized columns.
CorrelationMatrix pearson_matrix(const FeatureMatrix& m, Exec exec = Exec::kParallel);

// V = sqrt(chi2 / (n (min(r, c) - 1))) after dropping empty rows/columns;
// 0 when min(r, c) == 1.
double cramers_v(const std::vector<std::vector<double>>& contingency);

// Columns are treated as nominal: every distinct value is a level.
double cramers_v(std::span<const double> a, std::span<const double> b);
double cramers_v(std::span<const std::string> a, std::span<const std::string> b);

std::vector<std::vector<double>> contingency_table(std::span<const int> a, std::span<const int> b);

// Cramér's V among the discrete columns of `m`: integer-valued with at most
// `max_levels` distinct values.
CorrelationMatrix cramers_v_matrix(const FeatureMatrix& m, std::size_t max_levels = 20);

}  // namespace ppmx
