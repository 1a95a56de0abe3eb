#include <map>

#include <gtest/gtest.h>

#include "ppmx/bucketing.hpp"
#include "ppmx/labeling.hpp"
#include "ppmx/synthetic.hpp"
#include "support.hpp"

using namespace ppmx;
using namespace ppmx::testing;

namespace {

PrefixLog small_plog() {
  std::vector<std::vector<std::string>> traces = {
      {"A", "B", "C", "D", "E", "F", "G", "H", "I", "J", "K"}, {"A", "B", "C", "D", "E", "F"}, {"A", "B"}};
  return generate_prefix_log(activity_log(traces, {true, false, true}), 5, 20);
}

}  // namespace

TEST(Buckets, SingleIsOneBucket) {
  const auto plog = small_plog();
  const auto a = assign_buckets(plog, BucketStrategy::kSingle);
  ASSERT_EQ(a.buckets.size(), 1u);
  EXPECT_EQ(a.buckets.begin()->first.name(), "all");
  EXPECT_EQ(a.total(), plog.prefixes.size());
}

TEST(Buckets, PrefixLengthKeys) {
  const auto a = assign_buckets(small_plog(), BucketStrategy::kPrefixLength);
  std::vector<std::size_t> keys;
  for (const auto& [k, v] : a.buckets) {
    keys.push_back(*k.length);
    for (const auto& p : v) EXPECT_EQ(p.prefix_length(), *k.length);
  }
  EXPECT_EQ(keys, (std::vector<std::size_t>{1, 6, 11}));
}

TEST(Buckets, PartitionOnSepsisLikeLog) {
  const auto log = apply_labeling(synthetic_sepsis_log(), synthetic_label_rule());
  const auto plog = generate_prefix_log(log, 5, 13);
  std::map<std::size_t, std::size_t> expected;
  for (const auto& t : log.traces())
    for (auto len : prefix_lengths(t.size(), 5, 13)) ++expected[len];
  const auto a = assign_buckets(plog, BucketStrategy::kPrefixLength);
  ASSERT_EQ(a.buckets.size(), 3u);
  for (const auto& [k, v] : a.buckets) EXPECT_EQ(v.size(), expected.at(*k.length));
  EXPECT_EQ(a.total(), plog.prefixes.size());
}

TEST(Buckets, SummariesMarkSmallAndSingleClass) {
  const auto a = assign_buckets(small_plog(), BucketStrategy::kPrefixLength);
  const auto s = summarize_buckets(a, 2);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_TRUE(s[0].trainable);            // len 1: 3 prefixes, both classes
  EXPECT_TRUE(s[1].trainable);            // len 6: 2 prefixes, both classes
  EXPECT_FALSE(s[2].trainable);           // len 11: 1 prefix
  const auto strict = summarize_buckets(a, 1);
  EXPECT_FALSE(strict[2].trainable);      // single class
  EXPECT_EQ(strict[2].skip_reason, "single class");
}

TEST(Buckets, EmptyPrefixLogRejected) {
  EXPECT_PPMX_ERROR(assign_buckets(PrefixLog{}, BucketStrategy::kSingle), kData, "EmptyPrefixLog");
}
