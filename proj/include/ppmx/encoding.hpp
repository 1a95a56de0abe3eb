#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ppmx/event_log.hpp"
#include "ppmx/feature_matrix.hpp"
#include "ppmx/prefixing.hpp"

namespace ppmx {

enum class EncodingKind { kAggregation, kIndex };

const char* to_string(EncodingKind k);
EncodingKind parse_encoding_kind(const std::string& text);

// Fitted encoder: the vocabulary of each categorical attribute (sorted
// levels seen at fit time) and the resulting column layout. The activity is
// keyed by the schema's activity column name.
struct EncoderSpec {
  EncodingKind kind = EncodingKind::kAggregation;
  Schema schema;
  std::map<std::string, std::vector<std::string>> vocabulary;
  std::optional<std::size_t> index_length;
  std::vector<FeatureDescriptor> columns;

  bool operator==(const EncoderSpec&) const = default;
};

EncoderSpec fit_encoder(std::span<const PrefixTrace> bucket, const Schema& schema, EncodingKind kind);

// Unseen levels and nulls encode as zeros; nulls are skipped by aggregates.
FeatureMatrix transform(const EncoderSpec& spec, std::span<const PrefixTrace> prefixes);

// Closed-form column count of a fitted spec.
std::size_t expected_width(const Schema& schema, const EncoderSpec& spec);

}  // namespace ppmx
