#include <set>

#include <gtest/gtest.h>

#include "ppmx/prefixing.hpp"
#include "ppmx/rng.hpp"
#include "ppmx/synthetic.hpp"
#include "ppmx/labeling.hpp"
#include "support.hpp"

using namespace ppmx;
using namespace ppmx::testing;

namespace {

std::vector<std::size_t> enumerate(std::size_t n, std::size_t g, std::size_t k) {
  std::vector<std::size_t> out;
  for (std::size_t len = 1; len <= std::min(n, k); ++len)
    if ((len - 1) % g == 0) out.push_back(len);
  return out;
}

std::vector<std::string> acts(std::size_t n) {
  std::vector<std::string> a;
  for (std::size_t i = 0; i < n; ++i) a.push_back("a" + std::to_string(i % 4));
  return a;
}

}  // namespace

TEST(PrefixLengths, Examples) {
  EXPECT_EQ(prefix_lengths(5, 2, 20), (std::vector<std::size_t>{1, 3, 5}));
  EXPECT_EQ(prefix_lengths(35, 5, 20), (std::vector<std::size_t>{1, 6, 11, 16}));
  EXPECT_EQ(prefix_lengths(1, 7, 3), (std::vector<std::size_t>{1}));
  EXPECT_EQ(prefix_count(5, 2, 20), 3u);
  EXPECT_EQ(prefix_count(185, 5, 20), 4u);
}

TEST(PrefixLengths, ClosedFormMatchesEnumeration) {
  for (std::size_t n = 1; n <= 60; ++n)
    for (std::size_t g = 1; g <= 9; ++g)
      for (std::size_t k = 1; k <= 30; ++k) {
        const auto e = enumerate(n, g, k);
        ASSERT_EQ(prefix_lengths(n, g, k), e) << n << " " << g << " " << k;
        ASSERT_EQ(prefix_count(n, g, k), e.size());
      }
}

TEST(PrefixLengths, InvalidArgumentsRejected) {
  EXPECT_PPMX_ERROR(prefix_count(3, 0, 5), kConfig, "BadPrefixing");
}

TEST(GeneratePrefixLog, HeadsLabelsAndStatics) {
  std::vector<Trace> traces;
  Rng rng = make_rng(11);
  std::size_t expected = 0, positives = 0;
  for (int i = 0; i < 40; ++i) {
    const std::size_t n = 1 + uniform_index(rng, 30);
    Trace t = make_trace("c" + std::to_string(100 + i), acts(n), bernoulli(rng, 0.4));
    t.static_payload["s"] = static_cast<double>(i);
    positives += *t.label;
    expected += prefix_count(n, 3, 13);
    traces.push_back(t);
  }
  Schema schema;
  schema.attributes = {{"s", Scope::kStatic, DType::kNumeric}};
  const EventLog log(schema, traces);
  const auto plog = generate_prefix_log(log, 3, 13);
  ASSERT_EQ(plog.prefixes.size(), expected);
  std::size_t len1_pos = 0;
  for (const auto& p : plog.prefixes) {
    const Trace* base = log.find(p.base_case_id());
    ASSERT_NE(base, nullptr);
    ASSERT_LE(p.prefix_length(), base->size());
    EXPECT_EQ((p.prefix_length() - 1) % 3, 0u);
    EXPECT_LE(p.prefix_length(), 13u);
    for (std::size_t i = 0; i < p.prefix_length(); ++i) EXPECT_EQ(p.events()[i], base->events[i]);
    EXPECT_EQ(p.static_payload(), base->static_payload);
    EXPECT_EQ(p.label(), base->label);
    if (p.prefix_length() == 1 && *p.label()) ++len1_pos;
  }
  EXPECT_EQ(len1_pos, positives);
  // Canonical order: case id, then length.
  for (std::size_t i = 1; i < plog.prefixes.size(); ++i) {
    const auto& a = plog.prefixes[i - 1];
    const auto& b = plog.prefixes[i];
    EXPECT_TRUE(a.base_case_id() < b.base_case_id() ||
                (a.base_case_id() == b.base_case_id() && a.prefix_length() < b.prefix_length()));
  }
}

TEST(GeneratePrefixLog, GapOneUnboundedIsEveryHead) {
  const auto log = activity_log({acts(4), acts(7)}, {true, false});
  const auto plog = generate_prefix_log(log, 1, kUnboundedPrefixLength);
  EXPECT_EQ(plog.prefixes.size(), 11u);
}

TEST(GeneratePrefixLog, Errors) {
  EXPECT_PPMX_ERROR(generate_prefix_log(EventLog(Schema{}, {}), 5, 20), kData, "EmptyLog");
  EXPECT_PPMX_ERROR(generate_prefix_log(activity_log({{"A"}}, {}), 5, 20), kData, "UnlabeledLog");
}

TEST(WritePrefixLog, CsvCarriesBaseIdAndLength) {
  const auto log = activity_log({acts(6)}, {true});
  std::ostringstream out;
  write_prefix_log(out, generate_prefix_log(log, 5, 20), "%Y-%m-%dT%H:%M:%S");
  const std::string text = out.str();
  EXPECT_NE(text.find("base_case_id"), std::string::npos);
  EXPECT_NE(text.find("prefix_length"), std::string::npos);
  EXPECT_NE(text.find("c00000_6"), std::string::npos);
}
