#include "ppmx/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "ppmx/bucketing.hpp"
#include "ppmx/correlation.hpp"
#include "ppmx/csv_io.hpp"
#include "ppmx/encoding.hpp"
#include "ppmx/error.hpp"
#include "ppmx/importance.hpp"
#include "ppmx/labeling.hpp"
#include "ppmx/log_stats.hpp"
#include "ppmx/metrics.hpp"
#include "ppmx/mutual_info.hpp"
#include "ppmx/pfi.hpp"
#include "ppmx/prefixing.hpp"
#include "ppmx/profiling.hpp"
#include "ppmx/reports.hpp"
#include "ppmx/rng.hpp"
#include "ppmx/serialization.hpp"
#include "ppmx/shap.hpp"
#include "ppmx/stability.hpp"
#include "ppmx/text.hpp"
#include "ppmx/time_features.hpp"

namespace ppmx {

namespace fs = std::filesystem;

LogSplit split_log(const EventLog& log, SplitKind kind, double train_fraction, std::uint64_t seed) {
  if (log.size() < 2) throw_data("TooFewTraces", "a train/test split needs at least 2 traces");
  std::vector<std::size_t> order(log.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const auto& traces = log.traces();
  if (kind == SplitKind::kTemporal) {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (traces[a].start() != traces[b].start()) return traces[a].start() < traces[b].start();
      return traces[a].case_id < traces[b].case_id;
    });
  } else {
    Rng rng = make_rng(seed, 0x73706c6974);
    shuffle(order, rng);
  }
  auto n_train = static_cast<std::size_t>(train_fraction * static_cast<double>(order.size()));
  n_train = std::clamp<std::size_t>(n_train, 1, order.size() - 1);
  std::vector<Trace> train, test;
  for (std::size_t i = 0; i < order.size(); ++i) (i < n_train ? train : test).push_back(traces[order[i]]);
  return {EventLog(log.schema(), std::move(train)), EventLog(log.schema(), std::move(test))};
}

namespace {

// Stable 64-bit hash for deriving per-bucket seed streams.
std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

Json stats_json(const LogStats& s) {
  return {{"n_traces", s.n_traces},
          {"shortest_trace", s.shortest_trace},
          {"avg_trace_length", s.avg_trace_length},
          {"longest_trace", s.longest_trace},
          {"n_trace_variants", s.n_trace_variants},
          {"positive_ratio", s.positive_ratio},
          {"n_event_classes", s.n_event_classes},
          {"n_static_cols", s.n_static_cols},
          {"n_dynamic_cols", s.n_dynamic_cols},
          {"n_categorical_cols", s.n_categorical_cols},
          {"n_numeric_cols", s.n_numeric_cols},
          {"n_static_levels", s.n_static_levels},
          {"n_dynamic_levels", s.n_dynamic_levels}};
}

Json prefix_summary(const PrefixLog& plog) {
  std::map<std::size_t, std::size_t> by_length;
  for (const auto& p : plog.prefixes) ++by_length[p.prefix_length()];
  Json lengths = Json::array();
  for (const auto& [len, count] : by_length) lengths.push_back({{"length", len}, {"count", count}});
  return {{"n_prefixes", plog.prefixes.size()}, {"by_length", lengths}};
}

void write_text(const fs::path& path, const std::string& text) { write_file(path.string(), text); }

template <typename Writer>
void write_stream(const fs::path& path, Writer&& w) {
  std::ostringstream out;
  w(out);
  write_text(path, out.str());
}

// Prefix i of the bucket -> minutes from its last event to the case end.
std::vector<double> remaining_minutes(std::span<const PrefixTrace> prefixes) {
  std::vector<double> out;
  out.reserve(prefixes.size());
  for (const auto& p : prefixes) {
    const TimestampMs last = p.events().back().timestamp;
    out.push_back(static_cast<double>(p.base().end() - last) / 60000.0);
  }
  return out;
}

FeatureMatrix sample_rows(const FeatureMatrix& m, std::size_t max_rows, std::uint64_t seed) {
  if (m.n_rows() <= max_rows) return m;
  Rng rng = make_rng(seed, 0x726f7773);
  const auto idx = sample_indices(m.n_rows(), max_rows, rng);
  return m.select_rows(idx);
}

bool both_classes(const FeatureMatrix& m) {
  bool pos = false, neg = false;
  for (int y : m.labels()) (y ? pos : neg) = true;
  return pos && neg;
}

void prepare_output(const fs::path& dir) {
  if (fs::exists(dir)) {
    if (!fs::is_directory(dir)) throw_config("BadOutput", dir.string() + " is not a directory");
    const bool empty = fs::is_empty(dir);
    const bool previous_run = fs::exists(dir / kManifestFile) || fs::exists(dir / kGridManifestFile);
    if (!empty && !previous_run)
      throw_config("OutputNotEmpty", dir.string() + " is not empty and does not hold a previous run");
    if (!empty) fs::remove_all(dir);
  }
  fs::create_directories(dir);
}

struct BucketOutputs {
  std::map<std::string, ImportanceVector> methods;
  std::vector<std::string> profile_refs;
};

class RunContext {
 public:
  RunContext(const RunConfig& config, fs::path dir, Exec exec) : config_(config), dir_(std::move(dir)), exec_(exec) {}

  std::string stage = "config";

  RunFingerprint run() {
    stage = "config";
    validate(config_);
    write_json(dir_ / "config.json", to_json(config_));

    stage = "ingest";
    EventLog log = ingest_csv(config_.log_path, config_.mapping);
    if (config_.min_trace_length > 1) log = drop_short_traces(log, config_.min_trace_length);
    if (log.empty()) throw_data("EmptyLog", "no traces left after ingest");

    stage = "label";
    if (config_.label_rule) log = apply_labeling(log, *config_.label_rule);
    if (!log.is_labeled()) throw_data("UnlabeledLog", "log has no labels and the config has no label_rule");
    if (config_.time_features) log = derive_time_features(log);
    write_json(dir_ / "log_stats.json", stats_json(compute_log_stats(log)));

    stage = "split";
    const LogSplit split = split_log(log, config_.split, config_.train_fraction, config_.seed);
    {
      Json train_ids = Json::array(), test_ids = Json::array();
      for (const auto& t : split.train.traces()) train_ids.push_back(t.case_id);
      for (const auto& t : split.test.traces()) test_ids.push_back(t.case_id);
      write_json(dir_ / "split.json", {{"kind", to_string(config_.split)},
                                       {"train_fraction", config_.train_fraction},
                                       {"train_cases", train_ids},
                                       {"test_cases", test_ids}});
    }

    stage = "prefix";
    const PrefixLog train_plog = generate_prefix_log(split.train, config_.gap, config_.max_length);
    const PrefixLog test_plog = generate_prefix_log(split.test, config_.gap, config_.max_length);
    write_json(dir_ / "prefix_log.json",
               {{"gap", config_.gap},
                {"max_length", config_.max_length == kUnboundedPrefixLength ? Json(nullptr) : Json(config_.max_length)},
                {"train", prefix_summary(train_plog)},
                {"test", prefix_summary(test_plog)}});

    stage = "bucket";
    const BucketAssignment train_buckets = assign_buckets(train_plog, config_.bucketing);
    const BucketAssignment test_buckets = assign_buckets(test_plog, config_.bucketing);
    const auto summaries = summarize_buckets(train_buckets, config_.min_bucket_size);
    {
      Json arr = Json::array();
      for (const auto& s : summaries) {
        Json e = s;
        const auto it = test_buckets.buckets.find(s.key);
        e["test_size"] = it == test_buckets.buckets.end() ? 0 : it->second.size();
        arr.push_back(e);
      }
      write_json(dir_ / "buckets.json", arr);
    }
    if (std::none_of(summaries.begin(), summaries.end(), [](const auto& s) { return s.trainable; }))
      throw_training("NoTrainableBucket", "every bucket is too small or single-class");

    RunFingerprint fp;
    fp.settings = settings_text(config_);
    fp.settings_hash = sha256_hex(fp.settings);
    fp.seed = config_.seed;
    for (const auto& s : summaries) {
      if (!s.trainable) continue;
      const auto& train_prefixes = train_buckets.buckets.at(s.key);
      const auto test_it = test_buckets.buckets.find(s.key);
      const std::vector<PrefixTrace> empty;
      const auto& test_prefixes = test_it == test_buckets.buckets.end() ? empty : test_it->second;
      auto out = run_bucket(s.key, train_prefixes, test_prefixes, log.schema());
      fp.methods[s.key.name()] = std::move(out.methods);
      for (auto& r : out.profile_refs) fp.profile_refs.push_back(std::move(r));
    }
    stage = "fingerprint";
    write_json(dir_ / "fingerprint.json", Json(fp));
    stage = "report";
    emit_reports(dir_);
    return fp;
  }

 private:
  BucketOutputs run_bucket(const BucketKey& key, std::span<const PrefixTrace> train_prefixes,
                           std::span<const PrefixTrace> test_prefixes, const Schema& schema) {
    const std::string name = key.name();
    const fs::path bdir = dir_ / ("bucket_" + name);
    fs::create_directories(bdir);
    const std::uint64_t bucket_seed = mix_seed(config_.seed, fnv1a(name));
    BucketOutputs out;

    stage = "encode:" + name;
    const EncoderSpec spec = fit_encoder(train_prefixes, schema, config_.encoding);
    const FeatureMatrix train = transform(spec, train_prefixes);
    std::optional<FeatureMatrix> test;
    if (!test_prefixes.empty()) test = transform(spec, test_prefixes);
    write_json(bdir / "encoder.json", Json(spec));
    write_stream(bdir / "train_matrix.csv", [&](std::ostream& o) { write_matrix_csv(o, train); });
    if (test) write_stream(bdir / "test_matrix.csv", [&](std::ostream& o) { write_matrix_csv(o, *test); });

    stage = "profile:" + name;
    write_json(bdir / "profile_raw.json", Json(profile_prefixes(train_prefixes, schema)));
    write_json(bdir / "profile_train.json", Json(profile(train)));
    if (test) write_json(bdir / "profile_test.json", Json(profile(*test)));
    const CorrelationMatrix pearson = pearson_matrix(train, exec_);
    write_json(bdir / "pearson.json", Json(pearson));
    write_stream(bdir / "pearson.csv", [&](std::ostream& o) { write_correlation_csv(o, pearson); });
    const CorrelationMatrix cramers = cramers_v_matrix(train);
    write_json(bdir / "cramers_v.json", Json(cramers));
    write_stream(bdir / "cramers_v.csv", [&](std::ostream& o) { write_correlation_csv(o, cramers); });
    MutualInfoReport mi = mutual_info(train, config_.mi_bins, config_.top_k);
    mi.extra_columns.push_back("remainingtime");
    mi.extra_scores.push_back(nmi_with_label(remaining_minutes(train_prefixes), train.labels(), config_.mi_bins));
    write_json(bdir / "mi.json", Json(mi));
    for (const char* f : {"profile_raw.json", "profile_train.json", "pearson.json", "cramers_v.json", "mi.json"})
      out.profile_refs.push_back("bucket_" + name + "/" + f);

    stage = "train:" + name;
    std::optional<LinearModel> lr;
    std::optional<TreeEnsemble> gbt;
    std::vector<double> train_margins, test_margins;
    if (config_.model == ModelKind::kLogReg) {
      lr = train_logreg(train, config_.logreg);
      write_json(bdir / "model.json", Json(*lr));
      train_margins = lr->margins(train);
      if (test) test_margins = lr->margins(*test);
    } else {
      GbtConfig gc = config_.gbt;
      gc.seed = bucket_seed;
      gbt = train_gbt(train, gc, exec_);
      write_json(bdir / "model.json", Json(*gbt));
      train_margins = gbt->margins(train);
      if (test) test_margins = gbt->margins(*test);
    }
    write_json(bdir / "eval_train.json", Json(evaluate_margins(train_margins, train.labels())));
    if (test) write_json(bdir / "eval_test.json", Json(evaluate_margins(test_margins, test->labels())));

    stage = "explain:" + name;
    Json notes = Json::array();
    if (config_.has_xai(XaiMethod::kModelSpecific)) {
      if (lr) {
        out.methods["lr_coef"] = lr_coefficients(*lr);
      } else {
        for (auto c : kAllGbtCriteria) {
          auto iv = gbt_importance(*gbt, c);
          out.methods[iv.criterion] = std::move(iv);
        }
      }
      for (const auto& [method, iv] : out.methods) write_json(bdir / ("importance_" + method + ".json"), Json(iv));
    }
    if (config_.has_xai(XaiMethod::kPfi)) {
      auto run_pfi = [&](const FeatureMatrix& m, std::uint64_t seed) {
        return lr ? permutation_importance(*lr, m, config_.pfi_iterations, seed, exec_)
                  : permutation_importance(*gbt, m, config_.pfi_iterations, seed, exec_);
      };
      const PfiReport pfi_train = run_pfi(train, mix_seed(bucket_seed, 1));
      write_json(bdir / "pfi_train.json", Json(pfi_train));
      out.methods["pfi_train"] = pfi_train.importance();
      if (test && both_classes(*test)) {
        const PfiReport pfi_test = run_pfi(*test, mix_seed(bucket_seed, 2));
        write_json(bdir / "pfi_test.json", Json(pfi_test));
        out.methods["pfi_test"] = pfi_test.importance();
      } else {
        notes.push_back("pfi on the test split skipped: it does not contain both classes");
      }
    }
    if (config_.has_xai(XaiMethod::kShap)) {
      auto write_shap = [&](const AttributionSet& set, const std::string& split) {
        write_json(bdir / ("shap_" + split + ".json"), Json(set));
        const GlobalShapReport global = shap_global(set);
        write_json(bdir / ("shap_global_" + split + ".json"), Json(global));
        out.methods["shap_" + split] = global.importance;
      };
      const FeatureMatrix train_rows = sample_rows(train, config_.shap_max_instances, mix_seed(bucket_seed, 4));
      std::optional<FeatureMatrix> test_rows;
      if (test) test_rows = sample_rows(*test, config_.shap_max_instances, mix_seed(bucket_seed, 5));
      // Train and test explainers are built separately, both from training data only.
      if (lr) {
        write_shap(LinearShapExplainer(*lr, train, "train").explain(train_rows, "train"), "train");
        if (test_rows) write_shap(LinearShapExplainer(*lr, train, "train").explain(*test_rows, "test"), "test");
      } else {
        const std::uint64_t bg_seed = mix_seed(bucket_seed, 3);
        write_shap(TreeShapExplainer::from_training(*gbt, train, config_.shap_background, bg_seed)
                       .explain(train_rows, "train", exec_),
                   "train");
        if (test_rows)
          write_shap(TreeShapExplainer::from_training(*gbt, train, config_.shap_background, bg_seed)
                         .explain(*test_rows, "test", exec_),
                     "test");
      }
    }
    if (!out.methods.empty()) {
      Json agreement = Json::array(), collinearity = Json::array();
      for (const auto& [method, iv] : out.methods) {
        Json a = agreement_with_mi(iv, mi, config_.top_k);
        a["method"] = method;
        agreement.push_back(a);
        for (auto flag : collinearity_scan(iv, pearson, config_.top_k, config_.corr_threshold)) {
          flag.method = method;
          collinearity.push_back(Json(flag));
        }
      }
      write_json(bdir / "agreement.json", agreement);
      write_json(bdir / "collinearity.json", collinearity);
    }
    if (!notes.empty()) write_json(bdir / "notes.json", notes);
    return out;
  }

  const RunConfig& config_;
  fs::path dir_;
  Exec exec_;
};

}  // namespace

RunResult run_experiment(const RunConfig& config, const fs::path& out_dir, Exec exec) {
  RunResult result;
  result.dir = out_dir;
  result.manifest.unsafe_pairings = config.unsafe_pairings;
  try {
    validate(config);
    result.manifest.config_hash = sha256_hex(to_json(config).dump());
    prepare_output(out_dir);
  } catch (const Error& e) {
    // Nothing is written for an invalid config or an unusable output directory.
    result.manifest.failure = FailureInfo{"config", e.code(), e.reason(), e.what()};
    return result;
  }
  RunContext ctx(config, out_dir, exec);
  try {
    ctx.run();
  } catch (const Error& e) {
    result.manifest.failure = FailureInfo{ctx.stage, e.code(), e.reason(), e.what()};
  } catch (const std::exception& e) {
    result.manifest.failure = FailureInfo{ctx.stage, ErrorCode::kData, "Unexpected", e.what()};
  }
  write_manifest(out_dir, result.manifest);
  result.manifest = read_manifest(out_dir);
  return result;
}

GridResult run_grid(const GridConfig& grid, const fs::path& out_dir, Exec exec) {
  const auto cells = expand_grid(grid);
  prepare_output(out_dir);
  GridResult result;
  result.dir = out_dir;
  Json cell_json = Json::array();
  // cell name without the seed suffix -> (seed, run dir) of the successful runs
  std::map<std::string, std::vector<std::pair<std::uint64_t, fs::path>>> groups;
  for (const auto& cell : cells) {
    RunResult r = run_experiment(cell.config, out_dir / cell.name, exec);
    Json c = {{"name", cell.name},
              {"status", r.manifest.ok() ? "ok" : "failed"},
              {"exit_code", r.exit_code()},
              {"seed", cell.config.seed},
              {"config_hash", r.manifest.config_hash}};
    if (r.manifest.failure) {
      c["failure"] = {{"stage", r.manifest.failure->stage},
                      {"reason", r.manifest.failure->reason},
                      {"message", r.manifest.failure->message}};
    }
    if (fs::exists(out_dir / cell.name / kManifestFile))
      c["manifest_sha256"] = sha256_file(out_dir / cell.name / kManifestFile);
    cell_json.push_back(c);
    if (r.manifest.ok()) {
      ++result.n_ok;
      const std::string group = cell.name.substr(0, cell.name.rfind("__seed"));
      groups[group].emplace_back(cell.config.seed, out_dir / cell.name);
    } else {
      ++result.n_failed;
    }
    result.cells.emplace_back(cell.name, std::move(r));
  }

  Json stability = Json::array();
  for (const auto& [group, runs] : groups) {
    if (runs.size() < 2) continue;
    const fs::path sdir = out_dir / "stability";
    fs::create_directories(sdir);
    for (std::size_t a = 0; a < runs.size(); ++a) {
      for (std::size_t b = a + 1; b < runs.size(); ++b) {
        const auto fa = load_json<RunFingerprint>(runs[a].second / "fingerprint.json");
        const auto fb = load_json<RunFingerprint>(runs[b].second / "fingerprint.json");
        const RunConfig cfg = load_run_config(runs[a].second / "config.json");
        const StabilityReport rep = compare_runs(fa, fb, cfg.top_k);
        const std::string stem =
            group + "__seed" + std::to_string(runs[a].first) + "_vs_seed" + std::to_string(runs[b].first);
        write_json(sdir / (stem + ".json"), Json(rep));
        write_stream(sdir / (stem + ".csv"), [&](std::ostream& o) { write_stability_csv(o, rep); });
        stability.push_back("stability/" + stem + ".json");
      }
    }
  }
  write_json(out_dir / kGridManifestFile, {{"n_cells", cells.size()},
                                           {"n_ok", result.n_ok},
                                           {"n_failed", result.n_failed},
                                           {"cells", cell_json},
                                           {"stability_reports", stability}});
  return result;
}

}  // namespace ppmx
