#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ppmx {

enum class Transform {
  kStaticNumeric,
  kStaticOneHot,
  kFreq,
  kAgg,
  kIndexOneHot,
  kIndexNumeric,
};

enum class AggFn { kMin, kMax, kMean, kSum, kStd };

const char* to_string(Transform t);
Transform parse_transform(const std::string& text);
const char* to_string(AggFn f);
AggFn parse_agg_fn(const std::string& text);

// Provenance of one encoded column.
struct FeatureDescriptor {
  std::string column_name;
  std::string source_attribute;
  Transform transform = Transform::kStaticNumeric;
  std::optional<std::string> level;       // one-hot and freq columns
  std::optional<AggFn> agg;               // kAgg
  std::optional<std::size_t> position;    // index columns, 1-based

  bool operator==(const FeatureDescriptor&) const = default;
};

struct RowId {
  std::string case_id;
  std::size_t prefix_length = 0;

  bool operator==(const RowId&) const = default;
};

// Dense row-major matrix with binary labels.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::vector<FeatureDescriptor> columns, std::vector<RowId> rows, std::vector<double> values,
                std::vector<int> labels);

  std::size_t n_rows() const { return rows_.size(); }
  std::size_t n_cols() const { return columns_.size(); }
  bool empty() const { return rows_.empty(); }

  double at(std::size_t r, std::size_t c) const { return values_[r * n_cols() + c]; }
  double& at(std::size_t r, std::size_t c) { return values_[r * n_cols() + c]; }
  std::span<const double> row(std::size_t r) const { return {values_.data() + r * n_cols(), n_cols()}; }
  std::vector<double> column(std::size_t c) const;

  const std::vector<double>& values() const { return values_; }
  const std::vector<int>& labels() const { return labels_; }
  const std::vector<RowId>& rows() const { return rows_; }
  const std::vector<FeatureDescriptor>& columns() const { return columns_; }
  std::vector<std::string> column_names() const;
  std::optional<std::size_t> column_index(const std::string& name) const;

  // Columns reordered to `names`; throws DataError if one is missing.
  FeatureMatrix select_columns(const std::vector<std::string>& names) const;
  FeatureMatrix select_rows(std::span<const std::size_t> indices) const;
  FeatureMatrix with_column(FeatureDescriptor descriptor, std::span<const double> values) const;

  bool operator==(const FeatureMatrix&) const = default;

 private:
  std::vector<FeatureDescriptor> columns_;
  std::vector<RowId> rows_;
  std::vector<double> values_;
  std::vector<int> labels_;
};

double zero_fraction(const FeatureMatrix& m);
std::size_t nan_count(const FeatureMatrix& m);

// Header = column names, last column = label. Row ids and descriptors live
// in the JSON sidecar (see serialization.hpp).
void write_matrix_csv(std::ostream& out, const FeatureMatrix& m);
// Descriptors default to static-numeric columns named after the header and
// row ids to the row number; pass the sidecar's values to restore them.
FeatureMatrix read_matrix_csv(std::istream& in, std::optional<std::vector<FeatureDescriptor>> columns = {},
                              std::optional<std::vector<RowId>> rows = {});

}  // namespace ppmx
