#include "support.hpp"

#include <unistd.h>

#include <algorithm>
#include <cmath>

#include "ppmx/metrics.hpp"
#include "ppmx/rng.hpp"
#include "ppmx/text.hpp"

namespace ppmx::testing {

Trace make_trace(const std::string& id, const std::vector<std::string>& activities, std::optional<bool> label,
                 TimestampMs start, TimestampMs step) {
  Trace t;
  t.case_id = id;
  t.label = label;
  for (std::size_t i = 0; i < activities.size(); ++i)
    t.events.push_back({activities[i], start + static_cast<TimestampMs>(i) * step, {}});
  return t;
}

EventLog activity_log(const std::vector<std::vector<std::string>>& traces, const std::vector<bool>& labels) {
  std::vector<Trace> out;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "c%05zu", i);
    out.push_back(make_trace(id, traces[i], labels.empty() ? std::optional<bool>() : labels[i],
                             kT0 + static_cast<TimestampMs>(i) * 3600'000));
  }
  return EventLog(Schema{}, std::move(out));
}

EventLog random_log(std::uint64_t seed, std::size_t n_traces, std::size_t max_len) {
  Rng rng = make_rng(seed, 7);
  Schema schema;
  const std::size_t n_static = uniform_index(rng, 4), n_dynamic = uniform_index(rng, 5);
  for (std::size_t i = 0; i < n_static; ++i)
    schema.attributes.push_back({"s" + std::to_string(i), Scope::kStatic, bernoulli(rng, 0.5) ? DType::kNumeric : DType::kCategorical});
  for (std::size_t i = 0; i < n_dynamic; ++i)
    schema.attributes.push_back({"d" + std::to_string(i), Scope::kDynamic, bernoulli(rng, 0.5) ? DType::kNumeric : DType::kCategorical});
  std::vector<std::size_t> alphabet;
  for (std::size_t i = 0; i < schema.attributes.size() + 1; ++i) alphabet.push_back(1 + uniform_index(rng, 5));
  auto draw = [&](std::size_t a, DType dtype) -> Value {
    if (bernoulli(rng, 0.2)) return std::monostate{};
    if (dtype == DType::kNumeric) return std::round(normal(rng) * 100.0) / 10.0;
    return std::string(1, static_cast<char>('p' + uniform_index(rng, alphabet[a])));
  };
  std::vector<Trace> traces;
  for (std::size_t t = 0; t < n_traces; ++t) {
    Trace tr;
    tr.case_id = "t" + std::to_string(1000 + t);
    tr.label = bernoulli(rng, 0.5);
    for (std::size_t a = 0; a < schema.attributes.size(); ++a)
      if (schema.attributes[a].scope == Scope::kStatic) tr.static_payload[schema.attributes[a].name] = draw(a, schema.attributes[a].dtype);
    const std::size_t n = 1 + uniform_index(rng, max_len);
    for (std::size_t i = 0; i < n; ++i) {
      Event e;
      e.activity = std::string(1, static_cast<char>('A' + uniform_index(rng, alphabet.back())));
      e.timestamp = kT0 + static_cast<TimestampMs>(t * 86'400'000 + i * kMinuteMs);
      for (std::size_t a = 0; a < schema.attributes.size(); ++a)
        if (schema.attributes[a].scope == Scope::kDynamic) e.payload[schema.attributes[a].name] = draw(a, schema.attributes[a].dtype);
      tr.events.push_back(std::move(e));
    }
    traces.push_back(std::move(tr));
  }
  return EventLog(std::move(schema), std::move(traces));
}

std::vector<PrefixTrace> full_prefixes(const EventLog& log) {
  std::vector<PrefixTrace> out;
  for (const auto& t : log.traces()) out.emplace_back(std::make_shared<const Trace>(t), t.size());
  return out;
}

FeatureDescriptor numeric_column(const std::string& name) {
  FeatureDescriptor d;
  d.column_name = name;
  d.source_attribute = name;
  return d;
}

FeatureMatrix make_matrix(const std::vector<std::string>& names, const std::vector<double>& row_major,
                          const std::vector<int>& labels) {
  std::vector<FeatureDescriptor> cols;
  for (const auto& n : names) cols.push_back({n, n, Transform::kStaticNumeric, {}, {}, {}});
  std::vector<RowId> rows;
  for (std::size_t i = 0; i < labels.size(); ++i) rows.push_back({"r" + std::to_string(i), 1});
  return FeatureMatrix(std::move(cols), std::move(rows), row_major, labels);
}

FeatureMatrix random_matrix(std::size_t n, std::size_t d, std::uint64_t seed) {
  Rng rng = make_rng(seed, 99);
  std::vector<std::string> names;
  for (std::size_t j = 0; j < d; ++j) names.push_back("x" + std::to_string(j));
  std::vector<double> v(n * d);
  for (double& x : v) x = normal(rng);
  return make_matrix(names, v, std::vector<int>(n, 0));
}

FeatureMatrix logistic_matrix(std::size_t n, std::size_t d, std::uint64_t seed, double slope) {
  Rng rng = make_rng(seed, 11);
  std::vector<std::string> names;
  for (std::size_t j = 0; j < d; ++j) names.push_back("x" + std::to_string(j));
  std::vector<double> values(n * d);
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) values[i * d + j] = uniform01(rng);
    labels[i] = bernoulli(rng, sigmoid(slope * (values[i * d] - 0.5))) ? 1 : 0;
  }
  return make_matrix(names, values, labels);
}

FeatureMatrix with_labels(const FeatureMatrix& m, const std::vector<int>& labels) {
  return FeatureMatrix(m.columns(), m.rows(), m.values(), labels);
}

TempDir::TempDir(const std::string& tag) {
  path_ = std::filesystem::temp_directory_path() / ("ppmx_" + tag + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::vector<std::pair<std::string, std::string>> snapshot(const std::filesystem::path& dir) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    out.emplace_back(std::filesystem::relative(e.path(), dir).generic_string(), read_file(e.path().string()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace ppmx::testing
