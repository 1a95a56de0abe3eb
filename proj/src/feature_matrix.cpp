#include "ppmx/feature_matrix.hpp"

#include <cmath>
#include <ostream>
#include <unordered_map>

#include "ppmx/error.hpp"
#include "ppmx/text.hpp"

namespace ppmx {

const char* to_string(Transform t) {
  switch (t) {
    case Transform::kStaticNumeric: return "static_numeric";
    case Transform::kStaticOneHot: return "static_onehot";
    case Transform::kFreq: return "freq";
    case Transform::kAgg: return "agg";
    case Transform::kIndexOneHot: return "index_onehot";
    case Transform::kIndexNumeric: return "index_numeric";
  }
  return "?";
}

Transform parse_transform(const std::string& text) {
  for (auto t : {Transform::kStaticNumeric, Transform::kStaticOneHot, Transform::kFreq, Transform::kAgg,
                 Transform::kIndexOneHot, Transform::kIndexNumeric}) {
    if (text == to_string(t)) return t;
  }
  throw_data("BadDescriptor", "unknown transform '" + text + "'");
}

const char* to_string(AggFn f) {
  switch (f) {
    case AggFn::kMin: return "min";
    case AggFn::kMax: return "max";
    case AggFn::kMean: return "mean";
    case AggFn::kSum: return "sum";
    case AggFn::kStd: return "std";
  }
  return "?";
}

AggFn parse_agg_fn(const std::string& text) {
  for (auto f : {AggFn::kMin, AggFn::kMax, AggFn::kMean, AggFn::kSum, AggFn::kStd})
    if (text == to_string(f)) return f;
  throw_data("BadDescriptor", "unknown aggregate '" + text + "'");
}

FeatureMatrix::FeatureMatrix(std::vector<FeatureDescriptor> columns, std::vector<RowId> rows,
                             std::vector<double> values, std::vector<int> labels)
    : columns_(std::move(columns)), rows_(std::move(rows)), values_(std::move(values)), labels_(std::move(labels)) {
  if (values_.size() != rows_.size() * columns_.size())
    throw_data("ShapeMismatch", "value count does not match rows x columns");
  if (labels_.size() != rows_.size()) throw_data("ShapeMismatch", "label count does not match row count");
}

std::vector<double> FeatureMatrix::column(std::size_t c) const {
  std::vector<double> out(n_rows());
  for (std::size_t r = 0; r < n_rows(); ++r) out[r] = at(r, c);
  return out;
}

std::vector<std::string> FeatureMatrix::column_names() const {
  std::vector<std::string> out;
  out.reserve(columns_.size());
  for (const auto& c : columns_) out.push_back(c.column_name);
  return out;
}

std::optional<std::size_t> FeatureMatrix::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i)
    if (columns_[i].column_name == name) return i;
  return std::nullopt;
}

FeatureMatrix FeatureMatrix::select_columns(const std::vector<std::string>& names) const {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < columns_.size(); ++i) index.emplace(columns_[i].column_name, i);
  std::vector<std::size_t> src;
  std::vector<FeatureDescriptor> cols;
  for (const auto& n : names) {
    auto it = index.find(n);
    if (it == index.end()) throw_data("UnknownColumn", "matrix has no column '" + n + "'");
    src.push_back(it->second);
    cols.push_back(columns_[it->second]);
  }
  std::vector<double> vals(n_rows() * src.size());
  for (std::size_t r = 0; r < n_rows(); ++r)
    for (std::size_t c = 0; c < src.size(); ++c) vals[r * src.size() + c] = at(r, src[c]);
  return FeatureMatrix(std::move(cols), rows_, std::move(vals), labels_);
}

FeatureMatrix FeatureMatrix::select_rows(std::span<const std::size_t> indices) const {
  std::vector<RowId> rows;
  std::vector<double> vals;
  std::vector<int> labels;
  vals.reserve(indices.size() * n_cols());
  for (std::size_t r : indices) {
    rows.push_back(rows_.at(r));
    labels.push_back(labels_[r]);
    auto src = row(r);
    vals.insert(vals.end(), src.begin(), src.end());
  }
  return FeatureMatrix(columns_, std::move(rows), std::move(vals), std::move(labels));
}

FeatureMatrix FeatureMatrix::with_column(FeatureDescriptor descriptor, std::span<const double> values) const {
  if (values.size() != n_rows()) throw_data("ShapeMismatch", "new column has the wrong length");
  if (column_index(descriptor.column_name)) throw_data("ColumnNameCollision", descriptor.column_name);
  auto cols = columns_;
  cols.push_back(std::move(descriptor));
  std::vector<double> vals;
  vals.reserve(n_rows() * cols.size());
  for (std::size_t r = 0; r < n_rows(); ++r) {
    auto src = row(r);
    vals.insert(vals.end(), src.begin(), src.end());
    vals.push_back(values[r]);
  }
  return FeatureMatrix(std::move(cols), rows_, std::move(vals), labels_);
}

double zero_fraction(const FeatureMatrix& m) {
  if (m.values().empty()) return 0.0;
  std::size_t zeros = 0;
  for (double v : m.values()) zeros += v == 0.0;
  return static_cast<double>(zeros) / static_cast<double>(m.values().size());
}

std::size_t nan_count(const FeatureMatrix& m) {
  std::size_t n = 0;
  for (double v : m.values()) n += std::isnan(v);
  return n;
}

void write_matrix_csv(std::ostream& out, const FeatureMatrix& m) {
  std::vector<std::string> fields = m.column_names();
  fields.push_back("label");
  write_csv_row(out, fields);
  for (std::size_t r = 0; r < m.n_rows(); ++r) {
    fields.clear();
    for (double v : m.row(r)) fields.push_back(format_double(v));
    fields.push_back(std::to_string(m.labels()[r]));
    write_csv_row(out, fields);
  }
}

FeatureMatrix read_matrix_csv(std::istream& in, std::optional<std::vector<FeatureDescriptor>> columns,
                              std::optional<std::vector<RowId>> rows) {
  CsvReader reader(in);
  std::vector<std::string> header;
  if (!reader.next(header) || header.empty()) throw_data("EmptyFile", "matrix CSV has no header");
  const std::size_t n_cols = header.size() - 1;
  std::vector<FeatureDescriptor> cols;
  if (columns) {
    cols = std::move(*columns);
    if (cols.size() != n_cols) throw_data("ShapeMismatch", "sidecar column count differs from CSV header");
    for (std::size_t c = 0; c < n_cols; ++c)
      if (cols[c].column_name != header[c]) throw_data("ShapeMismatch", "sidecar column '" + cols[c].column_name + "' differs from header");
  } else {
    for (std::size_t c = 0; c < n_cols; ++c) cols.push_back({header[c], header[c], Transform::kStaticNumeric, {}, {}, {}});
  }
  std::vector<double> vals;
  std::vector<int> labels;
  std::vector<std::string> fields;
  while (reader.next(fields)) {
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != header.size()) throw_data("MalformedCsv", "line " + std::to_string(reader.line()) + " has the wrong field count");
    for (std::size_t c = 0; c < n_cols; ++c) {
      auto v = parse_double(fields[c]);
      if (!v) throw_data("BadNumber", "line " + std::to_string(reader.line()) + ": '" + fields[c] + "'");
      vals.push_back(*v);
    }
    auto y = parse_double(fields.back());
    if (!y || (*y != 0.0 && *y != 1.0)) throw_data("BadLabel", "line " + std::to_string(reader.line()));
    labels.push_back(static_cast<int>(*y));
  }
  std::vector<RowId> row_ids;
  if (rows) {
    row_ids = std::move(*rows);
    if (row_ids.size() != labels.size()) throw_data("ShapeMismatch", "sidecar row count differs from CSV");
  } else {
    for (std::size_t r = 0; r < labels.size(); ++r) row_ids.push_back({std::to_string(r), 0});
  }
  return FeatureMatrix(std::move(cols), std::move(row_ids), std::move(vals), std::move(labels));
}

}  // namespace ppmx
