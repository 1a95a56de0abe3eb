#include <sstream>

#include <gtest/gtest.h>

#include "ppmx/csv_io.hpp"
#include "ppmx/labeling.hpp"
#include "ppmx/log_stats.hpp"
#include "ppmx/rng.hpp"
#include "ppmx/synthetic.hpp"
#include "ppmx/time_features.hpp"
#include "support.hpp"

using namespace ppmx;
using namespace ppmx::testing;

namespace {

ColumnMapping basic_mapping() {
  ColumnMapping m;
  m.attributes = {{"age", Scope::kStatic, DType::kNumeric}, {"res", Scope::kDynamic, DType::kCategorical}};
  return m;
}

EventLog read(const std::string& csv, const ColumnMapping& m) {
  std::istringstream in(csv);
  return read_event_log(in, m);
}

double num(const Event& e, const std::string& name) { return *as_number(e.payload.at(name)); }

}  // namespace

TEST(Ingest, ThreeRowsOneCase) {
  const auto log = read(
      "case_id,activity,timestamp,age,res\n"
      "c1,A,2020-01-01T10:00:00,30,r1\n"
      "c1,B,2020-01-01T10:05:00,30,r2\n"
      "c1,C,2020-01-01T10:10:00,30,\n",
      basic_mapping());
  ASSERT_EQ(log.size(), 1u);
  const Trace& t = log.traces()[0];
  EXPECT_EQ(t.size(), 3u);
  EXPECT_EQ(t.events[1].activity, "B");
  EXPECT_EQ(*as_number(t.static_payload.at("age")), 30.0);
  EXPECT_TRUE(is_null(t.events[2].payload.at("res")));
}

TEST(Ingest, InconsistentStaticIsAnError) {
  EXPECT_PPMX_ERROR(read("case_id,activity,timestamp,age,res\n"
                         "c1,A,2020-01-01T10:00:00,30,r1\n"
                         "c1,B,2020-01-01T10:05:00,31,r1\n",
                         basic_mapping()),
                    kData, "InconsistentStatic");
}

TEST(Ingest, MissingColumnAndBadTimestamp) {
  EXPECT_PPMX_ERROR(read("case_id,activity,age,res\nc1,A,30,r\n", basic_mapping()), kData, "MissingColumn");
  EXPECT_PPMX_ERROR(read("case_id,activity,timestamp,age,res\nc1,A,yesterday,30,r\n", basic_mapping()), kData,
                    "BadTimestamp");
  EXPECT_PPMX_ERROR(read("case_id,activity,timestamp,age,res,extra\nc1,A,2020-01-01T00:00:00,30,r,x\n", basic_mapping()),
                    kData, "UnclassifiedColumn");
}

TEST(Ingest, EventsSortedWithStableTies) {
  const auto log = read(
      "case_id,activity,timestamp,age,res\n"
      "c1,late,2020-01-01T10:09:00,1,\n"
      "c1,tie1,2020-01-01T10:00:00,1,\n"
      "c1,tie2,2020-01-01T10:00:00,1,\n",
      basic_mapping());
  const auto& ev = log.traces()[0].events;
  EXPECT_EQ(ev[0].activity, "tie1");
  EXPECT_EQ(ev[1].activity, "tie2");
  EXPECT_EQ(ev[2].activity, "late");
}

TEST(Ingest, CustomTimestampFormatAndFraction) {
  EXPECT_EQ(parse_timestamp("2020-01-01T00:00:00", kDefaultTimestampFormat), kT0);
  EXPECT_EQ(parse_timestamp("2020-01-01T00:00:00.250Z", kDefaultTimestampFormat), kT0 + 250);
  EXPECT_EQ(parse_timestamp("01/01/2020 00:01", "%d/%m/%Y %H:%M"), kT0 + kMinuteMs);
  EXPECT_EQ(format_timestamp(kT0 + 250, kDefaultTimestampFormat), "2020-01-01T00:00:00.250");
}

TEST(Ingest, ExportReingestRoundTrip) {
  SyntheticLogConfig sc;
  sc.n_traces = 60;
  EventLog log = apply_labeling(synthetic_sepsis_log(sc), synthetic_label_rule());
  log = derive_time_features(log);
  const ColumnMapping mapping = export_mapping(log);
  std::ostringstream out;
  write_event_log(out, log, mapping);
  std::istringstream in(out.str());
  const EventLog back = read_event_log(in, mapping);
  EXPECT_EQ(back, log);
}

TEST(Labeling, VacuousActivityRuleIsAllNegative) {
  const auto log = activity_log({{"A", "B"}, {"A"}}, {});
  LabelRule r;
  r.kind = LabelRule::Kind::kActivityOccurs;
  r.activity = "Release A";
  const auto labeled = apply_labeling(log, r);
  EXPECT_DOUBLE_EQ(compute_log_stats(labeled).positive_ratio, 0.0);
}

TEST(Labeling, MedianDurationSplitsRoughlyInHalf) {
  SyntheticLogConfig sc;
  sc.n_traces = 400;
  const auto log = synthetic_sepsis_log(sc);
  LabelRule r;
  r.kind = LabelRule::Kind::kDurationThreshold;
  r.op = Comparison::kGreater;
  r.threshold_is_median = true;
  const double ratio = compute_log_stats(apply_labeling(log, r)).positive_ratio;
  EXPECT_GE(ratio, 0.4);
  EXPECT_LE(ratio, 0.6);
}

TEST(Labeling, StaticThresholdMatchesGroundTruth) {
  SyntheticLogConfig sc;
  sc.n_traces = 300;
  const auto log = synthetic_sepsis_log(sc);
  std::size_t truth = 0;
  for (const auto& t : log.traces()) truth += *as_number(t.static_payload.at("Age")) > 50.0;
  LabelRule r;
  r.kind = LabelRule::Kind::kStaticThreshold;
  r.attribute = "Age";
  r.op = Comparison::kGreater;
  r.threshold = 50.0;
  EXPECT_DOUBLE_EQ(compute_log_stats(apply_labeling(log, r)).positive_ratio,
                   static_cast<double>(truth) / static_cast<double>(log.size()));
}

TEST(Labeling, UnknownAttributeIsAConfigError) {
  const auto log = activity_log({{"A"}}, {});
  LabelRule r;
  r.kind = LabelRule::Kind::kStaticThreshold;
  r.attribute = "nope";
  r.threshold = 1.0;
  EXPECT_PPMX_ERROR(apply_labeling(log, r), kConfig, "UnknownAttribute");
}

TEST(TimeFeatures, DefinitionsOnHandPickedEvents) {
  std::vector<Trace> traces{make_trace("c", {"A", "B"}, true, kT0 + (14 * 60 + 30) * kMinuteMs, 60'000)};
  const auto log = derive_time_features(EventLog(Schema{}, traces));
  const auto& ev = log.traces()[0].events;
  EXPECT_EQ(num(ev[0], "hour"), 14.0);
  EXPECT_EQ(num(ev[0], "timesincemidnight"), 870.0);
  EXPECT_EQ(num(ev[0], "timesincelastevent"), 0.0);
  EXPECT_EQ(num(ev[0], "timesincecasestart"), 0.0);
  EXPECT_EQ(num(ev[0], "event_nr"), 1.0);
  EXPECT_EQ(num(ev[1], "timesincelastevent"), 1.0);
  EXPECT_EQ(num(ev[1], "event_nr"), 2.0);
  EXPECT_EQ(num(ev[0], "weekday"), 2.0);  // 2020-01-01 was a Wednesday
  EXPECT_EQ(num(ev[0], "month"), 1.0);
}

TEST(TimeFeatures, IdempotentAndCaseStartIsPrefixSum) {
  SyntheticLogConfig sc;
  sc.n_traces = 80;
  sc.seed = 3;
  const auto once = derive_time_features(synthetic_sepsis_log(sc));
  EXPECT_EQ(derive_time_features(once), once);
  for (const auto& t : once.traces()) {
    double sum = 0.0;
    for (const auto& e : t.events) {
      sum += num(e, "timesincelastevent");
      EXPECT_EQ(num(e, "timesincecasestart"), sum);
    }
  }
}

TEST(LogStats, Arithmetic) {
  const auto log = activity_log({{"A", "B", "C"}, {"A", "B", "C", "D", "E"}}, {true, false});
  const auto s = compute_log_stats(log);
  EXPECT_EQ(s.shortest_trace, 3u);
  EXPECT_EQ(s.longest_trace, 5u);
  EXPECT_DOUBLE_EQ(s.avg_trace_length, 4.0);
  EXPECT_EQ(s.n_event_classes, 5u);
  EXPECT_DOUBLE_EQ(s.positive_ratio, 0.5);
}

TEST(LogStats, VariantsAndUnlabeledError) {
  const auto log = activity_log({{"A", "B"}, {"A", "B"}}, {true, false});
  EXPECT_EQ(compute_log_stats(log).n_trace_variants, 1u);
  EXPECT_PPMX_ERROR(compute_log_stats(activity_log({{"A"}}, {})), kData, "UnlabeledLog");
}

TEST(LogStats, PositiveRatioIsExact) {
  Rng rng = make_rng(5);
  std::vector<std::vector<std::string>> traces(97, {"A"});
  std::vector<bool> labels;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    labels.push_back(bernoulli(rng, 0.3));
    pos += labels.back();
  }
  EXPECT_EQ(compute_log_stats(activity_log(traces, labels)).positive_ratio,
            static_cast<double>(pos) / static_cast<double>(traces.size()));
}

TEST(LogStats, SyntheticFileIngestCounts776) {
  TempDir dir("synth776");
  const auto mapping = write_synthetic_log(dir.path().string(), "log");
  auto log = ingest_csv((dir / "log.csv").string(), mapping);
  log = apply_labeling(log, synthetic_label_rule());
  const auto s = compute_log_stats(log);
  EXPECT_EQ(s.n_traces, 776u);
  EXPECT_EQ(s.n_event_classes, 14u);
  EXPECT_EQ(s.shortest_trace, 5u);
  EXPECT_EQ(s.longest_trace, 185u);
  EXPECT_GT(s.avg_trace_length, 12.0);
  EXPECT_LT(s.avg_trace_length, 16.0);
}

TEST(DropShortTraces, KeepsOnlyLongEnough) {
  const auto log = activity_log({{"A"}, {"A", "B", "C"}}, {true, false});
  EXPECT_EQ(drop_short_traces(log, 2).size(), 1u);
}
