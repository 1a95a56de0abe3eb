#include <algorithm>
#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "ppmx/correlation.hpp"
#include "ppmx/encoding.hpp"
#include "ppmx/mutual_info.hpp"
#include "ppmx/profiling.hpp"
#include "ppmx/rng.hpp"
#include "ppmx/time_features.hpp"
#include "support.hpp"

using namespace ppmx;
using namespace ppmx::testing;

namespace {

double raw_pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

std::vector<int> balanced_labels(std::size_t n) {
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = static_cast<int>(i % 2);
  return y;
}

}  // namespace

TEST(Profile, ZeroFractionExamples) {
  const std::vector<double> zeros{0, 0, 0, 0};
  const auto p = profile_numeric("z", zeros);
  EXPECT_EQ(p.zero_fraction, 1.0);
  EXPECT_TRUE(p.constant);
  const std::vector<double> mixed{0, 0, 0, 5};
  const auto q = profile_numeric("m", mixed);
  EXPECT_EQ(q.zero_fraction, 0.75);
  EXPECT_FALSE(q.constant);
  EXPECT_EQ(q.distinct_count, 2u);
}

TEST(Profile, NumericSummaryAndMissing) {
  const std::vector<double> v{1, 2, 3, 4, std::nan("")};
  const auto p = profile_numeric("v", v);
  EXPECT_DOUBLE_EQ(p.missing_fraction, 0.2);
  ASSERT_TRUE(p.numeric.has_value());
  EXPECT_EQ(p.numeric->min, 1.0);
  EXPECT_EQ(p.numeric->max, 4.0);
  EXPECT_DOUBLE_EQ(p.numeric->mean, 2.5);
  EXPECT_DOUBLE_EQ(p.numeric->std, std::sqrt(1.25));
  EXPECT_EQ(p.numeric->histogram.size(), kHistogramBins);
  EXPECT_EQ(std::accumulate(p.numeric->histogram.begin(), p.numeric->histogram.end(), std::size_t{0}), 4u);
  EXPECT_EQ(p.numeric->quantiles.size(), kProfileQuantiles.size());
  EXPECT_TRUE(std::is_sorted(p.numeric->quantiles.begin(), p.numeric->quantiles.end()));
}

TEST(Profile, TopValuesOrderedByCountThenValue) {
  const std::vector<std::optional<std::string>> v{"b", "a", "b", std::nullopt, "c", "a", "d", "e", "f"};
  const auto p = profile_categorical("cat", v);
  ASSERT_EQ(p.top_values.size(), kTopValues);
  EXPECT_EQ(p.top_values[0], (std::pair<std::string, std::size_t>{"a", 2}));
  EXPECT_EQ(p.top_values[1], (std::pair<std::string, std::size_t>{"b", 2}));
  EXPECT_EQ(p.top_values[2].first, "c");
  EXPECT_EQ(p.distinct_count, 6u);
}

TEST(Profile, InvariantsOnRandomLogs) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto log = random_log(seed);
    const auto p = full_prefixes(log);
    const auto m = transform(fit_encoder(p, log.schema(), EncodingKind::kAggregation), p);
    const auto rep = profile(m);
    ASSERT_EQ(rep.columns.size(), m.n_cols());
    for (const auto& c : rep.columns) {
      EXPECT_GE(c.zero_fraction, 0.0);
      EXPECT_LE(c.zero_fraction, 1.0);
      EXPECT_EQ(c.constant, c.distinct_count == 1);
    }
    EXPECT_EQ(profile(m).columns.size(), rep.columns.size());
    const auto raw = profile_prefixes(p, log.schema());
    for (const auto& c : raw.columns) EXPECT_EQ(c.constant, c.distinct_count == 1);
  }
}

TEST(Profile, EmptyMatrixRejected) {
  EXPECT_PPMX_ERROR(profile(FeatureMatrix{}), kData, "EmptyMatrix");
}

TEST(Pearson, SelfAntiAndAffineInvariance) {
  auto m = random_matrix(200, 4, 3);
  std::vector<double> neg = m.column(0), affine = m.column(1);
  for (auto& v : neg) v = -v;
  for (auto& v : affine) v = 3.5 * v + 7.0;
  m = m.with_column(numeric_column("neg"), neg).with_column(numeric_column("aff"), affine);
  const auto c = pearson_matrix(m, Exec::kSerial);
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_NEAR(c.at(i, i), 1.0, 1e-12);
  EXPECT_NEAR(*c.between("x0", "neg"), -1.0, 1e-12);
  EXPECT_NEAR(*c.between("x1", "aff"), 1.0, 1e-12);
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j) {
      EXPECT_EQ(c.at(i, j), c.at(j, i));
      EXPECT_NEAR(c.at(i, j), raw_pearson(m.column(i), m.column(j)), 1e-12);
    }
}

TEST(Pearson, ConstantColumnIsZeroAndFlagged) {
  const auto m = make_matrix({"a", "k"}, {1, 5, 2, 5, 3, 5}, {0, 1, 0});
  const auto c = pearson_matrix(m);
  EXPECT_FALSE(c.constant[0]);
  EXPECT_TRUE(c.constant[1]);
  EXPECT_EQ(*c.between("a", "k"), 0.0);
  EXPECT_FALSE(std::isnan(c.at(1, 1)));
}

TEST(Pearson, TooFewRows) {
  EXPECT_PPMX_ERROR(pearson_matrix(make_matrix({"a"}, {1}, {0})), kData, "TooFewRows");
}

TEST(Pearson, HourAndTimeSinceMidnightFullyCorrelated) {
  Rng rng = make_rng(11);
  std::vector<Trace> traces;
  for (int i = 0; i < 300; ++i) {
    const TimestampMs start = kT0 + static_cast<TimestampMs>(uniform_index(rng, 24 * 30)) * 60 * kMinuteMs;
    traces.push_back(make_trace("c" + std::to_string(1000 + i), {"A"}, i % 2 == 0, start));
  }
  const auto log = derive_time_features(EventLog(Schema{}, traces));
  const auto p = full_prefixes(log);
  const auto m = transform(fit_encoder(p, log.schema(), EncodingKind::kIndex), p);
  const auto c = pearson_matrix(m);
  EXPECT_NEAR(*c.between("hour_1", "timesincemidnight_1"), 1.0, 1e-12);
}

TEST(CramersV, ContingencyExamples) {
  EXPECT_NEAR(cramers_v({{10, 0}, {0, 10}}), 1.0, 1e-12);
  EXPECT_EQ(cramers_v({{5, 5}, {5, 5}}), 0.0);
  // E = 5 in every cell, chi2 = 4 * 9 / 5 = 7.2, n = 20.
  EXPECT_NEAR(cramers_v({{8, 2}, {2, 8}}), std::sqrt(7.2 / 20.0), 1e-12);
  EXPECT_EQ(cramers_v({{3, 4, 5}}), 0.0);
  EXPECT_NEAR(cramers_v({{10, 0, 0}, {0, 10, 0}, {0, 0, 0}}), 1.0, 1e-12);
}

TEST(CramersV, SelfAndSymmetry) {
  Rng rng = make_rng(4);
  std::vector<double> a(300), b(300);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = static_cast<double>(uniform_index(rng, 4));
    b[i] = static_cast<double>(uniform_index(rng, 3));
  }
  EXPECT_NEAR(cramers_v(a, a), 1.0, 1e-12);
  EXPECT_EQ(cramers_v(a, b), cramers_v(b, a));
  const std::vector<std::string> s{"x", "y", "x", "z"}, t{"p", "q", "p", "q"};
  EXPECT_EQ(cramers_v(s, t), cramers_v(t, s));
  const auto table = contingency_table(std::vector<int>{0, 1, 1}, std::vector<int>{1, 1, 0});
  EXPECT_EQ(table, (std::vector<std::vector<double>>{{0, 1}, {1, 1}}));
}

TEST(CramersV, MatrixCoversDiscreteColumnsOnly) {
  const auto m = make_matrix({"d", "c", "e"}, {0, 0.5, 1, 1, 1.5, 0, 2, 2.25, 1, 0, 3.5, 0}, {0, 1, 0, 1});
  const auto c = cramers_v_matrix(m);
  EXPECT_EQ(c.columns, (std::vector<std::string>{"d", "e"}));
  EXPECT_NEAR(c.at(0, 0), 1.0, 1e-12);
  for (double v : c.values) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0 + 1e-12);
  }
}

TEST(MutualInfo, LabelCopyConstantAndNull) {
  const std::size_t n = 1000;
  const auto y = balanced_labels(n);
  std::vector<double> copy(y.begin(), y.end()), constant(n, 3.0), noise(n);
  Rng rng = make_rng(21);
  for (auto& v : noise) v = normal(rng);
  EXPECT_EQ(nmi_with_label(copy, y), 1.0);
  EXPECT_EQ(nmi_with_label(constant, y), 0.0);

  const double observed = nmi_with_label(noise, y);
  std::vector<double> null;
  std::vector<int> perm = y;
  for (int i = 0; i < 100; ++i) {
    shuffle(perm, rng);
    null.push_back(nmi_with_label(noise, perm));
  }
  std::sort(null.begin(), null.end());
  EXPECT_LT(observed, null[95]);
}

TEST(MutualInfo, SymmetryAndRelabeling) {
  Rng rng = make_rng(5);
  std::vector<int> a(500), b(500), relabeled(500);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = static_cast<int>(uniform_index(rng, 4));
    b[i] = (a[i] + static_cast<int>(uniform_index(rng, 2))) % 3;
    relabeled[i] = 7 - a[i];
  }
  EXPECT_EQ(normalized_mutual_info(a, b), normalized_mutual_info(b, a));
  EXPECT_NEAR(normalized_mutual_info(relabeled, b), normalized_mutual_info(a, b), 1e-12);
  const double v = normalized_mutual_info(a, b);
  EXPECT_GE(v, 0.0);
  EXPECT_LE(v, 1.0);
}

TEST(MutualInfo, DiscretizeQuantileBins) {
  std::vector<double> v(100);
  std::iota(v.begin(), v.end(), 0.0);
  const auto codes = discretize(v, 10);
  EXPECT_EQ(*std::max_element(codes.begin(), codes.end()), 9);
  for (int b = 0; b < 10; ++b) EXPECT_EQ(std::count(codes.begin(), codes.end(), b), 10);
  const std::vector<double> few{2, 1, 2, std::nan("")};
  EXPECT_EQ(discretize(few, 10), (std::vector<int>{1, 0, 1, 2}));
}

TEST(MutualInfo, DuplicateColumnKeepsScoreAndCorrelatesFully) {
  const auto y = balanced_labels(400);
  auto m = with_labels(random_matrix(400, 3, 8), y);
  std::vector<double> informative = m.column(0);
  for (std::size_t i = 0; i < informative.size(); ++i) informative[i] += 2.0 * y[i];
  m = m.with_column(numeric_column("inf"), informative);
  const auto before = mutual_info(m);
  const auto dup = m.with_column(numeric_column("inf_copy"), informative);
  const auto after = mutual_info(dup);
  EXPECT_EQ(after.scores.score_of("inf"), before.scores.score_of("inf"));
  EXPECT_EQ(after.scores.score_of("inf_copy"), before.scores.score_of("inf"));
  EXPECT_EQ(before.top_k_names().front(), "inf");
  EXPECT_NEAR(*pearson_matrix(dup).between("inf", "inf_copy"), 1.0, 1e-12);
}
