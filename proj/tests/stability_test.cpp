#include <algorithm>

#include <gtest/gtest.h>

#include "ppmx/correlation.hpp"
#include "ppmx/encoding.hpp"
#include "ppmx/importance.hpp"
#include "ppmx/mutual_info.hpp"
#include "ppmx/rng.hpp"
#include "ppmx/stability.hpp"
#include "ppmx/time_features.hpp"
#include "support.hpp"

using namespace ppmx;
using namespace ppmx::testing;

namespace {

const std::vector<std::string> kCols{"a", "b", "c", "d", "e", "f", "g", "h", "i", "j"};

ImportanceVector iv(const std::string& criterion, std::vector<double> scores) {
  return make_importance(criterion, kCols, std::move(scores));
}

RunFingerprint fingerprint(std::uint64_t seed, std::vector<double> pfi) {
  RunFingerprint f;
  f.settings = R"({"model":"gbt"})";
  f.settings_hash = "h";
  f.seed = seed;
  f.methods["all"]["gbt_gain"] = iv("gbt_gain", {9, 8, 7, 6, 5, 4, 3, 2, 1, 0});
  f.methods["all"]["pfi_test"] = iv("pfi_test", std::move(pfi));
  return f;
}

}  // namespace

TEST(CompareImportance, SelfComparison) {
  const auto a = iv("x", {9, 8, 7, 6, 5, 4, 3, 2, 1, 0});
  const auto m = compare_importance(a, a, 5);
  EXPECT_EQ(m.jaccard, 1.0);
  EXPECT_EQ(m.spearman, 1.0);
  EXPECT_EQ(*m.mean_abs_diff, 0.0);
  EXPECT_EQ(m.n_shared, 5u);
}

TEST(CompareImportance, DisjointTopK) {
  const auto a = iv("x", {9, 8, 7, 6, 5, 0, 0, 0, 0, 0});
  const auto b = iv("x", {0, 0, 0, 0, 0, 9, 8, 7, 6, 5});
  const auto m = compare_importance(a, b, 5);
  EXPECT_EQ(m.jaccard, 0.0);
  EXPECT_FALSE(m.mean_abs_diff.has_value());
  EXPECT_GE(m.spearman, -1.0);
  EXPECT_LE(m.spearman, 1.0);
}

TEST(CompareImportance, PartialOverlapAndSymmetry) {
  const auto a = iv("x", {9, 8, 7, 6, 5, 4, 3, 2, 1, 0});
  const auto b = iv("x", {9, 0, 7, 6, 1, 8, 5, 2, 1, 0});
  const auto ab = compare_importance(a, b, 5), ba = compare_importance(b, a, 5);
  EXPECT_DOUBLE_EQ(ab.jaccard, 3.0 / 7.0);  // {a,c,d} of {a,b,c,d,e,f,g}
  EXPECT_EQ(ab.jaccard, ba.jaccard);
  EXPECT_EQ(ab.spearman, ba.spearman);
  EXPECT_EQ(ab.mean_abs_diff, ba.mean_abs_diff);
  EXPECT_EQ(ab.n_shared, 3u);
}

TEST(CompareImportance, InvariantUnderCommonPermutation) {
  const std::vector<double> sa{9, 8, 7, 6, 5, 4, 3, 2, 1, 0}, sb{1, 8, 7, 9, 0, 4, 3, 2, 6, 5};
  const std::vector<std::size_t> perm{3, 7, 1, 9, 0, 2, 8, 5, 6, 4};
  std::vector<std::string> pc;
  std::vector<double> pa, pb;
  for (auto i : perm) {
    pc.push_back(kCols[i]);
    pa.push_back(sa[i]);
    pb.push_back(sb[i]);
  }
  const auto m1 = compare_importance(iv("x", sa), iv("x", sb), 5);
  const auto m2 = compare_importance(make_importance("x", pc, pa), make_importance("x", pc, pb), 5);
  EXPECT_EQ(m1.jaccard, m2.jaccard);
}

TEST(CompareImportance, UniverseMismatch) {
  const auto a = iv("x", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  const auto b = make_importance("x", {"a", "b"}, {1, 2});
  EXPECT_PPMX_ERROR(compare_importance(a, b), kData, "ColumnUniverseMismatch");
}

TEST(CompareRuns, DeterministicMethodsMatchAcrossSeeds) {
  const auto a = fingerprint(1, {0.3, 0.2, 0.1, 0, 0, 0, 0, 0, 0, 0});
  const auto b = fingerprint(2, {0.1, 0.3, 0, 0.2, 0, 0, 0, 0, 0.05, 0});
  const auto rep = compare_runs(a, b);
  EXPECT_EQ(rep.seed_a, 1u);
  EXPECT_EQ(rep.seed_b, 2u);
  ASSERT_EQ(rep.entries.size(), 2u);
  const auto* gain = rep.find("all", "gbt_gain");
  ASSERT_NE(gain, nullptr);
  EXPECT_EQ(gain->metrics.jaccard, 1.0);
  EXPECT_EQ(*gain->metrics.mean_abs_diff, 0.0);
  const auto* pfi = rep.find("all", "pfi_test");
  ASSERT_NE(pfi, nullptr);
  EXPECT_GE(pfi->metrics.jaccard, 0.0);
  EXPECT_LE(pfi->metrics.jaccard, 1.0);
  EXPECT_EQ(compare_runs(b, a).find("all", "pfi_test")->metrics.jaccard, pfi->metrics.jaccard);
}

TEST(CompareRuns, SettingsMismatch) {
  auto a = fingerprint(1, std::vector<double>(10, 0));
  auto b = a;
  b.settings = R"({"model":"logreg"})";
  EXPECT_PPMX_ERROR(compare_runs(a, b), kConfig, "SettingsMismatch");
}

TEST(Agreement, IdenticalAndDisjoint) {
  MutualInfoReport mi;
  mi.scores = make_importance("mi", kCols, {9, 8, 7, 6, 5, 4, 3, 2, 1, 0});
  const auto same = agreement_with_mi(mi.scores, mi);
  EXPECT_EQ(same.overlap, 1.0);
  EXPECT_EQ(*same.rank_correlation, 1.0);
  const auto other = agreement_with_mi(iv("pfi", {0, 0, 0, 0, 0, 5, 4, 3, 2, 1}), mi);
  EXPECT_EQ(other.overlap, 0.0);
  EXPECT_TRUE(other.shared.empty());
  EXPECT_FALSE(other.rank_correlation.has_value());
}

TEST(Agreement, LabelDeterminingFeatureInBothTopSets) {
  auto m = random_matrix(1000, 6, 4);
  std::vector<int> y(1000);
  std::vector<double> freq(1000);
  for (std::size_t i = 0; i < y.size(); ++i) {
    y[i] = i % 3 == 0;
    freq[i] = y[i] ? 1.0 + static_cast<double>(i % 2) : 0.0;
  }
  FeatureDescriptor fx = numeric_column("activity_X");
  fx.source_attribute = "activity";
  fx.transform = Transform::kFreq;
  fx.level = "X";
  m = with_labels(m, y).with_column(fx, freq);
  const auto mi = mutual_info(m);
  const auto imp = make_importance("pfi", m.column_names(), {0.01, 0.0, 0.02, 0.0, 0.0, 0.0, 0.4});
  const auto a = agreement_with_mi(imp, mi);
  EXPECT_GE(a.overlap, 0.2);
  EXPECT_NE(std::find(a.shared.begin(), a.shared.end(), "activity_X"), a.shared.end());
}

TEST(Collinearity, DuplicatePairFlagged) {
  auto m = random_matrix(1000, 4, 6);
  m = m.with_column(numeric_column("x0_copy"), m.column(0));
  const auto corr = pearson_matrix(m);
  const auto imp = make_importance("pfi", m.column_names(), {5, 4, 3, 2, 6});
  const auto flags = collinearity_scan(imp, corr);
  ASSERT_EQ(flags.size(), 1u);
  EXPECT_NEAR(flags[0].abs_correlation, 1.0, 1e-12);
  EXPECT_EQ(flags[0].method, "pfi");
  EXPECT_EQ(flags[0].threshold, kDefaultCollinearityThreshold);
  EXPECT_TRUE((flags[0].column_a == "x0_copy" && flags[0].column_b == "x0") ||
              (flags[0].column_a == "x0" && flags[0].column_b == "x0_copy"));
}

TEST(Collinearity, IndependentFeaturesGiveNoFlags) {
  const auto m = random_matrix(1000, 8, 7);
  const auto imp = make_importance("pfi", m.column_names(), {8, 7, 6, 5, 4, 3, 2, 1});
  EXPECT_TRUE(collinearity_scan(imp, pearson_matrix(m)).empty());
}

TEST(Collinearity, SortedStrongestFirst) {
  auto m = random_matrix(500, 3, 8);
  auto noisy = m.column(1);
  for (std::size_t i = 0; i < noisy.size(); ++i) noisy[i] += 0.2 * m.at(i, 2);
  m = m.with_column(numeric_column("dup0"), m.column(0)).with_column(numeric_column("near1"), noisy);
  const auto imp = make_importance("shap", m.column_names(), {5, 4, 1, 3, 2});
  const auto flags = collinearity_scan(imp, pearson_matrix(m));
  ASSERT_EQ(flags.size(), 2u);
  EXPECT_GE(flags[0].abs_correlation, flags[1].abs_correlation);
  for (const auto& f : flags) EXPECT_GE(f.abs_correlation, f.threshold);
}

TEST(Collinearity, HourAndTimeSinceMidnightFlagged) {
  Rng rng = make_rng(12);
  std::vector<Trace> traces;
  for (int i = 0; i < 200; ++i) {
    const TimestampMs start = kT0 + static_cast<TimestampMs>(uniform_index(rng, 24 * 60)) * 60 * kMinuteMs;
    traces.push_back(make_trace("c" + std::to_string(1000 + i), {"A", "B"}, i % 2 == 0, start, 60 * kMinuteMs));
  }
  const auto log = derive_time_features(EventLog(Schema{}, traces));
  const auto p = full_prefixes(log);
  const auto m = transform(fit_encoder(p, log.schema(), EncodingKind::kIndex), p);
  std::vector<double> scores(m.n_cols(), 0.0);
  scores[*m.column_index("hour_2")] = 2.0;
  scores[*m.column_index("timesincemidnight_2")] = 1.0;
  const auto flags = collinearity_scan(make_importance("pfi", m.column_names(), scores), pearson_matrix(m));
  const auto hit = std::find_if(flags.begin(), flags.end(), [](const CollinearityFlag& f) {
    return f.column_a == "hour_2" && f.column_b == "timesincemidnight_2";
  });
  ASSERT_NE(hit, flags.end());
  EXPECT_NEAR(hit->abs_correlation, 1.0, 1e-12);
}
