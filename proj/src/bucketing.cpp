#include "ppmx/bucketing.hpp"

#include "ppmx/error.hpp"

namespace ppmx {

const char* to_string(BucketStrategy s) { return s == BucketStrategy::kSingle ? "single" : "prefix_length"; }

BucketStrategy parse_bucket_strategy(const std::string& text) {
  if (text == "single") return BucketStrategy::kSingle;
  if (text == "prefix_length" || text == "prefix-length") return BucketStrategy::kPrefixLength;
  throw_config("BadBucketing", "unknown bucketing strategy '" + text + "'");
}

std::string BucketKey::name() const { return length ? "len_" + std::to_string(*length) : "all"; }

std::size_t BucketAssignment::total() const {
  std::size_t n = 0;
  for (const auto& [k, v] : buckets) n += v.size();
  return n;
}

BucketAssignment assign_buckets(const PrefixLog& plog, BucketStrategy strategy) {
  if (plog.prefixes.empty()) throw_data("EmptyPrefixLog", "nothing to bucket");
  BucketAssignment out;
  out.strategy = strategy;
  for (const auto& p : plog.prefixes) {
    BucketKey key{strategy, std::nullopt};
    if (strategy == BucketStrategy::kPrefixLength) key.length = p.prefix_length();
    out.buckets[key].push_back(p);
  }
  return out;
}

std::vector<BucketSummary> summarize_buckets(const BucketAssignment& assignment, std::size_t min_size) {
  std::vector<BucketSummary> out;
  for (const auto& [key, prefixes] : assignment.buckets) {
    BucketSummary s;
    s.key = key;
    s.size = prefixes.size();
    for (const auto& p : prefixes)
      if (p.label().value_or(false)) ++s.n_positive;
    s.positive_ratio = static_cast<double>(s.n_positive) / static_cast<double>(s.size);
    if (s.size < min_size) {
      s.trainable = false;
      s.skip_reason = "fewer than " + std::to_string(min_size) + " prefixes";
    } else if (s.n_positive == 0 || s.n_positive == s.size) {
      s.trainable = false;
      s.skip_reason = "single class";
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace ppmx
