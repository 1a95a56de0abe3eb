#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ppmx/prefixing.hpp"

namespace ppmx {

enum class BucketStrategy { kSingle, kPrefixLength };

const char* to_string(BucketStrategy s);
BucketStrategy parse_bucket_strategy(const std::string& text);

struct BucketKey {
  BucketStrategy strategy = BucketStrategy::kSingle;
  std::optional<std::size_t> length;  // set iff kPrefixLength

  // "all" or "len_<L>"; used for artifact directory names.
  std::string name() const;
  auto operator<=>(const BucketKey&) const = default;
};

// Partition of a prefix log; no bucket is empty. Bucket contents keep the
// prefix log's canonical order.
struct BucketAssignment {
  BucketStrategy strategy = BucketStrategy::kSingle;
  std::map<BucketKey, std::vector<PrefixTrace>> buckets;

  std::size_t total() const;
};

BucketAssignment assign_buckets(const PrefixLog& plog, BucketStrategy strategy);

struct BucketSummary {
  BucketKey key;
  std::size_t size = 0;
  std::size_t n_positive = 0;
  double positive_ratio = 0.0;
  bool trainable = true;
  std::string skip_reason;
};

// Marks buckets below `min_size` prefixes or holding a single class as not
// trainable.
std::vector<BucketSummary> summarize_buckets(const BucketAssignment& assignment, std::size_t min_size);

}  // namespace ppmx
