#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <sys/wait.h>

#include <gtest/gtest.h>

#include "ppmx/artifacts.hpp"
#include "ppmx/config.hpp"
#include "ppmx/csv_io.hpp"
#include "ppmx/labeling.hpp"
#include "ppmx/pipeline.hpp"
#include "ppmx/serialization.hpp"
#include "ppmx/synthetic.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using namespace ppmx;
using namespace ppmx::testing;

namespace {

class PipelineTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new TempDir("pipeline");
    SyntheticLogConfig cfg;
    cfg.n_traces = 150;
    cfg.max_length = 40;
    cfg.seed = 3;
    mapping_ = write_synthetic_log(dir_->path().string(), "small", cfg);
    cfg.min_length = cfg.max_length = 35;
    cfg.n_traces = 80;
    write_synthetic_log(dir_->path().string(), "fixed35", cfg);
  }
  static void TearDownTestSuite() {
    delete dir_;
    dir_ = nullptr;
  }

  static RunConfig base_config(const std::string& stem = "small") {
    RunConfig c;
    c.log_path = (dir_->path() / (stem + ".csv")).string();
    c.mapping = mapping_;
    c.label_rule = synthetic_label_rule();
    c.gbt.n_trees = 20;
    c.pfi_iterations = 3;
    c.shap_background = 20;
    c.shap_max_instances = 20;
    return c;
  }

  static TempDir* dir_;
  static ColumnMapping mapping_;
};

TempDir* PipelineTest::dir_ = nullptr;
ColumnMapping PipelineTest::mapping_;

std::string read_text(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(PPMX_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_F(PipelineTest, IllegalPairingFailsBeforeAnyWork) {
  TempDir out("illegal");
  auto c = base_config();
  c.encoding = EncodingKind::kIndex;
  c.bucketing = BucketStrategy::kSingle;
  const auto r = run_experiment(c, out / "run");
  EXPECT_EQ(r.exit_code(), 2);
  ASSERT_TRUE(r.manifest.failure.has_value());
  EXPECT_EQ(r.manifest.failure->reason, "IllegalPairing");
  EXPECT_FALSE(fs::exists(out / "run"));

  c.encoding = EncodingKind::kAggregation;
  c.bucketing = BucketStrategy::kPrefixLength;
  c.unsafe_pairings = true;
  const auto unsafe = run_experiment(c, out / "unsafe");
  EXPECT_EQ(unsafe.exit_code(), 0);
  EXPECT_TRUE(read_manifest(out / "unsafe").unsafe_pairings);
}

TEST_F(PipelineTest, SmokeSingleAggregationLogReg) {
  TempDir out("smoke");
  const auto r = run_experiment(base_config(), out / "run");
  ASSERT_EQ(r.exit_code(), 0) << (r.manifest.failure ? r.manifest.failure->message : "");
  const fs::path run = out / "run";
  const Json buckets = read_json(run / "buckets.json");
  ASSERT_EQ(buckets.size(), 1u);
  EXPECT_EQ(buckets[0]["key"]["name"], "all");
  for (const char* f : {"config.json", "log_stats.json", "split.json", "prefix_log.json", "fingerprint.json",
                        "summary.md", "manifest.json"})
    EXPECT_TRUE(fs::exists(run / f)) << f;
  const fs::path b = run / "bucket_all";
  for (const char* f : {"encoder.json", "train_matrix.csv", "test_matrix.csv", "model.json", "eval_train.json",
                        "eval_test.json", "profile_raw.json", "profile_train.json", "profile_test.json",
                        "pearson.json", "pearson.csv", "cramers_v.json", "mi.json", "importance_lr_coef.json",
                        "pfi_train.json", "shap_train.json", "shap_test.json", "shap_global_train.json",
                        "shap_global_test.json", "agreement.json", "collinearity.json", "bar_model_specific.svg",
                        "bar_pfi.svg", "bar_shap.svg", "shap_summary.csv", "shap_summary.svg"})
    EXPECT_TRUE(fs::exists(b / f)) << f;
  const auto m = read_manifest(run);
  EXPECT_TRUE(m.ok());
  for (const auto& e : m.files) EXPECT_EQ(sha256_file(run / e.path), e.sha256) << e.path;
  EXPECT_NE(read_text(run / "summary.md").find(m.config_hash), std::string::npos);
}

TEST_F(PipelineTest, BarChartValuesMatchJson) {
  TempDir out("bars");
  ASSERT_EQ(run_experiment(base_config(), out / "run").exit_code(), 0);
  const fs::path b = out / "run" / "bucket_all";
  const auto iv = load_json<ImportanceVector>(b / "importance_lr_coef.json");
  const std::string svg = read_text(b / "bar_model_specific.svg");
  const std::regex bar(R"re(data-feature="([^"]*)" data-value="([^"]*)")re");
  std::size_t n = 0;
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), bar); it != std::sregex_iterator(); ++it, ++n)
    EXPECT_EQ(std::stod((*it)[2]), iv.score_of((*it)[1])) << (*it)[1];
  EXPECT_EQ(n, 5u);
  const auto names = iv.top_k_names(5);
  std::size_t pos = 0;
  for (const auto& name : names) {
    const auto found = svg.find("data-feature=\"" + name + "\"", pos);
    ASSERT_NE(found, std::string::npos) << name;
    pos = found;
  }
}

TEST_F(PipelineTest, EmptyXaiGivesEvalAndProfilesOnly) {
  TempDir out("noxai");
  auto c = base_config();
  c.xai.clear();
  ASSERT_EQ(run_experiment(c, out / "run").exit_code(), 0);
  const fs::path b = out / "run" / "bucket_all";
  EXPECT_TRUE(fs::exists(b / "eval_test.json"));
  EXPECT_TRUE(fs::exists(b / "profile_train.json"));
  EXPECT_TRUE(fs::exists(b / "mi.json"));
  for (const auto& e : fs::directory_iterator(b)) {
    const std::string name = e.path().filename().string();
    EXPECT_EQ(name.find("bar_"), std::string::npos) << name;
    EXPECT_EQ(name.find("shap"), std::string::npos) << name;
    EXPECT_EQ(name.find("pfi"), std::string::npos) << name;
    EXPECT_EQ(name.find("importance_"), std::string::npos) << name;
  }
}

TEST_F(PipelineTest, PrefixIndexGbtLength35GivesFourBuckets) {
  TempDir out("index");
  auto c = base_config("fixed35");
  c.encoding = EncodingKind::kIndex;
  c.bucketing = BucketStrategy::kPrefixLength;
  c.model = ModelKind::kGbt;
  const auto r = run_experiment(c, out / "run");
  ASSERT_EQ(r.exit_code(), 0) << (r.manifest.failure ? r.manifest.failure->message : "");
  std::vector<std::string> names;
  for (const auto& b : read_json(out / "run" / "buckets.json")) {
    EXPECT_TRUE(b["trainable"].get<bool>());
    names.push_back(b["key"]["name"]);
  }
  EXPECT_EQ(names, (std::vector<std::string>{"len_1", "len_6", "len_11", "len_16"}));
  for (const auto& n : names) {
    EXPECT_TRUE(fs::exists(out / "run" / ("bucket_" + n) / "model.json"));
    EXPECT_TRUE(fs::exists(out / "run" / ("bucket_" + n) / "bar_shap.svg"));
  }
  const auto fp = load_json<RunFingerprint>(out / "run" / "fingerprint.json");
  EXPECT_EQ(fp.methods.size(), 4u);
  EXPECT_EQ(fp.methods.at("len_6").count("gbt_total_cover"), 1u);
}

TEST_F(PipelineTest, RunIsDeterministic) {
  TempDir out("determinism");
  auto c = base_config();
  c.model = ModelKind::kGbt;
  ASSERT_EQ(run_experiment(c, out / "a").exit_code(), 0);
  ASSERT_EQ(run_experiment(c, out / "b").exit_code(), 0);
  EXPECT_EQ(snapshot(out / "a"), snapshot(out / "b"));
  // Reusing an output directory replaces the previous run.
  ASSERT_EQ(run_experiment(c, out / "a").exit_code(), 0);
  EXPECT_EQ(snapshot(out / "a"), snapshot(out / "b"));
}

TEST_F(PipelineTest, RefusesForeignOutputDirectory) {
  TempDir out("foreign");
  fs::create_directories(out / "run");
  std::ofstream(out / "run" / "keep.txt") << "mine";
  const auto r = run_experiment(base_config(), out / "run");
  EXPECT_EQ(r.exit_code(), 2);
  EXPECT_EQ(r.manifest.failure->reason, "OutputNotEmpty");
  EXPECT_TRUE(fs::exists(out / "run" / "keep.txt"));
}

TEST_F(PipelineTest, TemporalSplitOrdersCaseStarts) {
  const auto log = apply_labeling(ingest_csv(base_config().log_path, mapping_), synthetic_label_rule());
  const auto split = split_log(log, SplitKind::kTemporal, 0.8, 0);
  EXPECT_EQ(split.train.size() + split.test.size(), log.size());
  EXPECT_EQ(split.train.size(), 120u);
  TimestampMs latest_train = 0, earliest_test = std::numeric_limits<TimestampMs>::max();
  for (const auto& t : split.train.traces()) latest_train = std::max(latest_train, t.start());
  for (const auto& t : split.test.traces()) earliest_test = std::min(earliest_test, t.start());
  EXPECT_LE(latest_train, earliest_test);

  const auto r1 = split_log(log, SplitKind::kRandom, 0.8, 5), r2 = split_log(log, SplitKind::kRandom, 0.8, 5);
  EXPECT_EQ(r1.train, r2.train);
  EXPECT_NE(split_log(log, SplitKind::kRandom, 0.8, 6).train, r1.train);
}

TEST_F(PipelineTest, TestOnlyLevelNeverReachesEncoder) {
  auto log = ingest_csv(base_config().log_path, mapping_);
  std::vector<Trace> traces = log.traces();
  auto latest = std::max_element(traces.begin(), traces.end(),
                                 [](const Trace& a, const Trace& b) { return a.start() < b.start(); });
  latest->events.front().activity = "Test Only";
  const EventLog edited(log.schema(), traces);
  TempDir out("leak");
  const auto edited_mapping = export_mapping(edited, mapping_.timestamp_format);
  export_csv((out / "edited.csv").string(), edited, edited_mapping);
  auto c = base_config();
  c.log_path = (out / "edited.csv").string();
  c.mapping = edited_mapping;
  ASSERT_EQ(run_experiment(c, out / "run").exit_code(), 0);
  const auto spec = load_json<EncoderSpec>(out / "run" / "bucket_all" / "encoder.json");
  const auto& acts = spec.vocabulary.at(spec.schema.activity);
  EXPECT_EQ(std::find(acts.begin(), acts.end(), "Test Only"), acts.end());
  EXPECT_EQ(read_text(out / "run" / "bucket_all" / "train_matrix.csv").find("Test Only"), std::string::npos);
}

TEST_F(PipelineTest, GridIsolatesPoisonedCell) {
  Json j = to_json(base_config());
  j["seeds"] = {1, 2};
  j["grid"] = {{"encodings", {"aggregation", "index"}},
               {"models", {"logreg", "gbt"}},
               {"cell_overrides",
                {{{"match", {{"encoding", "index"}, {"model", "gbt"}, {"seed", 2}}},
                  {"set", {{"label_rule", {{"kind", "activity_occurs"}, {"activity", "Never Happens"}}}}}}}}};
  const auto grid = grid_config_from_json(j);
  EXPECT_EQ(expand_grid(grid).size(), 8u);
  TempDir out("grid");
  const auto r = run_grid(grid, out / "grid");
  EXPECT_EQ(r.n_ok, 7u);
  EXPECT_EQ(r.n_failed, 1u);
  const Json manifest = read_json(out / "grid" / kGridManifestFile);
  EXPECT_EQ(manifest["n_cells"], 8);
  for (const auto& cell : manifest["cells"]) {
    if (cell["name"] == "index__prefix_length__gbt__seed2") {
      EXPECT_EQ(cell["status"], "failed");
      EXPECT_EQ(cell["exit_code"], 4);
      EXPECT_EQ(cell["failure"]["reason"], "NoTrainableBucket");
    } else {
      EXPECT_EQ(cell["status"], "ok") << cell["name"];
    }
  }
  // Three groups still have both seeds, so three stability reports.
  EXPECT_EQ(manifest["stability_reports"].size(), 3u);
  const auto rep = load_json<StabilityReport>(out / "grid" / "stability" / "aggregation__single__logreg__seed1_vs_seed2.json");
  const auto* lr = rep.find("all", "lr_coef");
  ASSERT_NE(lr, nullptr);
  EXPECT_EQ(lr->metrics.jaccard, 1.0);
  EXPECT_EQ(*lr->metrics.mean_abs_diff, 0.0);
}

TEST_F(PipelineTest, CliExitCodes) {
  TempDir out("cli");
  EXPECT_EQ(run_cli("--help"), 0);
  EXPECT_EQ(run_cli("run"), 2);
  EXPECT_EQ(run_cli("run --config " + (out / "missing.json").string() + " --out " + (out / "x").string()), 2);

  Json bad = to_json(base_config());
  bad["encoding"] = "index";
  bad["bucketing"] = "single";
  write_json(out / "bad.json", bad);
  EXPECT_EQ(run_cli("run --config " + (out / "bad.json").string() + " --out " + (out / "bad").string()), 2);
  EXPECT_FALSE(fs::exists(out / "bad"));

  Json unknown = to_json(base_config());
  unknown["bogus"] = 1;
  write_json(out / "unknown.json", unknown);
  EXPECT_EQ(run_cli("run --config " + (out / "unknown.json").string() + " --out " + (out / "u").string()), 2);

  Json never = to_json(base_config());
  never["label_rule"] = {{"kind", "activity_occurs"}, {"activity", "Never Happens"}};
  write_json(out / "never.json", never);
  EXPECT_EQ(run_cli("run --config " + (out / "never.json").string() + " --out " + (out / "never").string()), 4);
  EXPECT_EQ(read_manifest(out / "never").failure->stage, "bucket");

  write_json(out / "good.json", to_json(base_config()));
  EXPECT_EQ(run_cli("run --config " + (out / "good.json").string() + " --seed 1 --out " + (out / "s1").string()), 0);
  EXPECT_EQ(run_cli("run --config " + (out / "good.json").string() + " --seed 2 --out " + (out / "s2").string()), 0);
  EXPECT_EQ(run_cli("compare --runs " + (out / "s1").string() + " " + (out / "s2").string() + " --out " +
                    (out / "cmp").string()),
            0);
  EXPECT_EQ(run_cli("report --run " + (out / "s1").string()), 0);
  EXPECT_EQ(run_cli("profile --input " + (out / "s1" / "bucket_all" / "train_matrix.csv").string() + " --out " +
                    (out / "prof").string()),
            0);
  EXPECT_TRUE(fs::exists(out / "prof" / "mi.json"));
  EXPECT_EQ(run_cli("ingest --input " + base_config().log_path + " --mapping " + (dir_->path() / "small.mapping.json").string() +
                    " --out " + (out / "ing").string()),
            0);
  std::ofstream(out / "broken.csv") << "case_id,activity\nc1,A\n";
  EXPECT_EQ(run_cli("ingest --input " + (out / "broken.csv").string() + " --mapping " +
                    (dir_->path() / "small.mapping.json").string() + " --out " + (out / "ing2").string()),
            3);
}
