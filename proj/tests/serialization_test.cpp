#include <cmath>
#include <fstream>

#include <gtest/gtest.h>

#include "ppmx/rng.hpp"
#include "ppmx/serialization.hpp"
#include "support.hpp"

using namespace ppmx;
using namespace ppmx::testing;

namespace {

template <typename T>
T round_trip(const T& value) {
  return Json::parse(dump_json(Json(value))).get<T>();
}

FeatureMatrix labeled(std::size_t n, std::size_t d, std::uint64_t seed) {
  auto m = random_matrix(n, d, seed);
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = m.at(i, 0) - m.at(i, 1) > 0 ? 1 : 0;
  return with_labels(m, y);
}

}  // namespace

TEST(Serialization, DoublesSurviveBitExact) {
  Rng rng = make_rng(1);
  for (int i = 0; i < 2000; ++i) {
    const double v = normal(rng) * std::pow(10.0, static_cast<double>(uniform_index(rng, 40)) - 20.0);
    EXPECT_EQ(Json::parse(Json(v).dump()).get<double>(), v);
  }
}

TEST(Serialization, SchemaAndEncoderSpec) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto log = random_log(seed);
    EXPECT_EQ(round_trip(log.schema()), log.schema());
    const auto p = full_prefixes(log);
    const auto spec = fit_encoder(p, log.schema(), EncodingKind::kAggregation);
    EXPECT_EQ(round_trip(spec), spec);
  }
}

TEST(Serialization, ModelsReloadBitExact) {
  const auto m = labeled(200, 4, 2);
  const auto lr = train_logreg(m, {});
  const auto lr_back = round_trip(lr);
  EXPECT_EQ(lr_back, lr);
  EXPECT_EQ(lr_back.margins(m), lr.margins(m));
  const auto gbt = train_gbt(m, {});
  const auto gbt_back = round_trip(gbt);
  EXPECT_EQ(gbt_back, gbt);
  EXPECT_EQ(gbt_back.margins(m), gbt.margins(m));
}

TEST(Serialization, ReportsRoundTrip) {
  const auto m = labeled(150, 3, 3);
  const auto model = train_logreg(m, {});
  const auto imp = lr_coefficients(model);
  EXPECT_EQ(round_trip(imp), imp);
  const auto pfi = permutation_importance(model, m, 3, 5);
  EXPECT_EQ(round_trip(pfi), pfi);

  RunFingerprint f;
  f.settings = R"({"encoding":"aggregation","model":{"kind":"logreg"}})";
  f.settings_hash = "abc";
  f.seed = 7;
  f.methods["all"]["lr_coef"] = imp;
  f.profile_refs = {"bucket_all/profile_train.json"};
  EXPECT_EQ(round_trip(f), f);

  const auto stab = round_trip(compare_runs(f, f));
  ASSERT_EQ(stab.entries.size(), 1u);
  EXPECT_EQ(stab.entries[0].metrics.jaccard, 1.0);
  EXPECT_EQ(*stab.entries[0].metrics.mean_abs_diff, 0.0);
}

TEST(Serialization, FilesAndMalformedInput) {
  TempDir dir("serialization");
  const Json j = {{"a", 1}, {"b", {1.5, 2.5}}};
  write_json(dir / "x.json", j);
  EXPECT_EQ(read_json(dir / "x.json"), j);
  std::ifstream in(dir / "x.json");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(text.back(), '\n');
  std::ofstream(dir / "bad.json") << "{ not json";
  EXPECT_PPMX_ERROR(read_json(dir / "bad.json"), kData, "MalformedJson");
}
