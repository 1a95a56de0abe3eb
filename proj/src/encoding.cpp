#include "ppmx/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <unordered_map>

#include "ppmx/error.hpp"

namespace ppmx {

const char* to_string(EncodingKind k) { return k == EncodingKind::kAggregation ? "aggregation" : "index"; }

EncodingKind parse_encoding_kind(const std::string& text) {
  if (text == "aggregation" || text == "agg") return EncodingKind::kAggregation;
  if (text == "index") return EncodingKind::kIndex;
  throw_config("BadEncoding", "unknown encoding '" + text + "'");
}

namespace {

// Dynamic attributes in encoding order: activity first, then schema order.
std::vector<AttributeSpec> dynamic_attributes(const Schema& schema) {
  std::vector<AttributeSpec> out{{schema.activity, Scope::kDynamic, DType::kCategorical}};
  for (const auto& a : schema.attributes)
    if (a.scope == Scope::kDynamic) out.push_back(a);
  return out;
}

const Value* event_value(const Event& e, const Schema& schema, const std::string& name, Value& scratch) {
  if (name == schema.activity) {
    scratch = e.activity;
    return &scratch;
  }
  auto it = e.payload.find(name);
  return it == e.payload.end() ? nullptr : &it->second;
}

std::optional<double> finite_number(const Value* v) {
  if (!v) return std::nullopt;
  auto d = as_number(*v);
  if (!d || std::isnan(*d)) return std::nullopt;
  return d;
}

void push_onehot(std::vector<FeatureDescriptor>& cols, const std::string& attr, const std::vector<std::string>& levels,
                 Transform t, std::optional<std::size_t> pos) {
  for (const auto& level : levels) {
    std::string name = attr + "_";
    if (pos) name += std::to_string(*pos) + "_";
    name += level;
    cols.push_back({name, attr, t, level, std::nullopt, pos});
  }
}

std::vector<FeatureDescriptor> layout(const EncoderSpec& spec) {
  const Schema& schema = spec.schema;
  std::vector<FeatureDescriptor> cols;
  for (const auto& a : schema.attributes) {
    if (a.scope != Scope::kStatic) continue;
    if (a.dtype == DType::kNumeric)
      cols.push_back({a.name, a.name, Transform::kStaticNumeric, std::nullopt, std::nullopt, std::nullopt});
    else
      push_onehot(cols, a.name, spec.vocabulary.at(a.name), Transform::kStaticOneHot, std::nullopt);
  }
  const auto dyn = dynamic_attributes(schema);
  if (spec.kind == EncodingKind::kAggregation) {
    for (const auto& a : dyn) {
      if (a.dtype == DType::kCategorical) {
        push_onehot(cols, a.name, spec.vocabulary.at(a.name), Transform::kFreq, std::nullopt);
        continue;
      }
      for (AggFn f : {AggFn::kMin, AggFn::kMax, AggFn::kMean, AggFn::kSum, AggFn::kStd})
        cols.push_back({a.name + "_" + to_string(f), a.name, Transform::kAgg, std::nullopt, f, std::nullopt});
    }
  } else {
    for (std::size_t p = 1; p <= *spec.index_length; ++p) {
      for (const auto& a : dyn) {
        if (a.dtype == DType::kCategorical)
          push_onehot(cols, a.name, spec.vocabulary.at(a.name), Transform::kIndexOneHot, p);
        else
          cols.push_back({a.name + "_" + std::to_string(p), a.name, Transform::kIndexNumeric, std::nullopt,
                          std::nullopt, p});
      }
    }
  }
  std::set<std::string> names;
  for (const auto& c : cols)
    if (!names.insert(c.column_name).second)
      throw_data("ColumnNameCollision", "encoded column name '" + c.column_name + "' is ambiguous");
  return cols;
}

}  // namespace

EncoderSpec fit_encoder(std::span<const PrefixTrace> bucket, const Schema& schema, EncodingKind kind) {
  if (bucket.empty()) throw_data("EmptyBucket", "cannot fit an encoder on an empty bucket");
  EncoderSpec spec;
  spec.kind = kind;
  spec.schema = schema;
  if (kind == EncodingKind::kIndex) {
    const std::size_t len = bucket.front().prefix_length();
    for (const auto& p : bucket)
      if (p.prefix_length() != len)
        throw_data("MixedLengthBucket", "index encoding needs prefixes of one length");
    spec.index_length = len;
  }

  std::map<std::string, std::set<std::string>> levels;
  for (const auto& a : schema.attributes)
    if (a.dtype == DType::kCategorical) levels[a.name];
  levels[schema.activity];
  for (const auto& p : bucket) {
    for (const auto& [name, v] : p.static_payload())
      if (const std::string* c = as_category(v); c && levels.count(name)) levels[name].insert(*c);
    for (const auto& e : p.events()) {
      levels[schema.activity].insert(e.activity);
      for (const auto& [name, v] : e.payload)
        if (const std::string* c = as_category(v); c && levels.count(name)) levels[name].insert(*c);
    }
  }
  for (auto& [name, set] : levels) spec.vocabulary[name] = std::vector<std::string>(set.begin(), set.end());
  spec.columns = layout(spec);
  return spec;
}

FeatureMatrix transform(const EncoderSpec& spec, std::span<const PrefixTrace> prefixes) {
  const Schema& schema = spec.schema;
  const auto dyn = dynamic_attributes(schema);
  const std::size_t width = spec.columns.size();
  const std::size_t n = prefixes.size();

  if (spec.kind == EncodingKind::kIndex) {
    for (const auto& p : prefixes)
      if (p.prefix_length() != *spec.index_length)
        throw_data("MixedLengthBucket", "prefix length differs from the encoder's index length");
  }

  // Level -> position within its one-hot group.
  std::unordered_map<std::string, std::unordered_map<std::string, std::size_t>> level_pos;
  for (const auto& [name, levels] : spec.vocabulary)
    for (std::size_t i = 0; i < levels.size(); ++i) level_pos[name][levels[i]] = i;
  auto level_index = [&](const std::string& attr, const Value* v) -> std::optional<std::size_t> {
    if (!v) return std::nullopt;
    const std::string* c = as_category(*v);
    if (!c) return std::nullopt;
    const auto& m = level_pos.at(attr);
    auto it = m.find(*c);
    if (it == m.end()) return std::nullopt;
    return it->second;
  };

  std::vector<double> values(n * width, 0.0);
  std::vector<RowId> rows(n);
  std::vector<int> labels(n);

#pragma omp parallel for schedule(static)
  for (std::size_t r = 0; r < n; ++r) {
    const PrefixTrace& p = prefixes[r];
    rows[r] = {p.base_case_id(), p.prefix_length()};
    labels[r] = p.label().value_or(false) ? 1 : 0;
    double* out = values.data() + r * width;
    std::size_t col = 0;
    Value scratch;

    for (const auto& a : schema.attributes) {
      if (a.scope != Scope::kStatic) continue;
      auto it = p.static_payload().find(a.name);
      const Value* v = it == p.static_payload().end() ? nullptr : &it->second;
      if (a.dtype == DType::kNumeric) {
        out[col++] = finite_number(v).value_or(0.0);
      } else {
        if (auto li = level_index(a.name, v)) out[col + *li] = 1.0;
        col += spec.vocabulary.at(a.name).size();
      }
    }

    const auto events = p.events();
    if (spec.kind == EncodingKind::kAggregation) {
      for (const auto& a : dyn) {
        if (a.dtype == DType::kCategorical) {
          for (const auto& e : events)
            if (auto li = level_index(a.name, event_value(e, schema, a.name, scratch))) out[col + *li] += 1.0;
          col += spec.vocabulary.at(a.name).size();
          continue;
        }
        double mn = std::numeric_limits<double>::infinity(), mx = -mn, sum = 0.0;
        std::size_t count = 0;
        for (const auto& e : events) {
          if (auto d = finite_number(event_value(e, schema, a.name, scratch))) {
            mn = std::min(mn, *d);
            mx = std::max(mx, *d);
            sum += *d;
            ++count;
          }
        }
        if (count == 0) {
          col += 5;
          continue;
        }
        const double mean = sum / static_cast<double>(count);
        double ss = 0.0;
        for (const auto& e : events)
          if (auto d = finite_number(event_value(e, schema, a.name, scratch))) ss += (*d - mean) * (*d - mean);
        out[col++] = mn;
        out[col++] = mx;
        out[col++] = mean;
        out[col++] = sum;
        out[col++] = std::sqrt(ss / static_cast<double>(count));
      }
    } else {
      for (std::size_t pos = 0; pos < *spec.index_length; ++pos) {
        const Event& e = events[pos];
        for (const auto& a : dyn) {
          const Value* v = event_value(e, schema, a.name, scratch);
          if (a.dtype == DType::kCategorical) {
            if (auto li = level_index(a.name, v)) out[col + *li] = 1.0;
            col += spec.vocabulary.at(a.name).size();
          } else {
            out[col++] = finite_number(v).value_or(0.0);
          }
        }
      }
    }
  }
  return FeatureMatrix(spec.columns, std::move(rows), std::move(values), std::move(labels));
}

std::size_t expected_width(const Schema& schema, const EncoderSpec& spec) {
  auto levels = [&](const std::string& name) {
    auto it = spec.vocabulary.find(name);
    return it == spec.vocabulary.end() ? std::size_t{0} : it->second.size();
  };
  std::size_t static_terms = 0;
  std::size_t dyn_levels = levels(schema.activity);
  std::size_t dyn_numeric = 0;
  for (const auto& a : schema.attributes) {
    if (a.scope == Scope::kStatic) {
      static_terms += a.dtype == DType::kNumeric ? 1 : levels(a.name);
    } else if (a.dtype == DType::kNumeric) {
      ++dyn_numeric;
    } else {
      dyn_levels += levels(a.name);
    }
  }
  if (spec.kind == EncodingKind::kAggregation) return static_terms + dyn_levels + 5 * dyn_numeric;
  return static_terms + spec.index_length.value_or(0) * (dyn_levels + dyn_numeric);
}

}  // namespace ppmx
