// Command-line front end: ingest, profile, run, grid, compare, report, synth.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ppmx/artifacts.hpp"
#include "ppmx/config.hpp"
#include "ppmx/correlation.hpp"
#include "ppmx/csv_io.hpp"
#include "ppmx/error.hpp"
#include "ppmx/feature_matrix.hpp"
#include "ppmx/labeling.hpp"
#include "ppmx/log_stats.hpp"
#include "ppmx/mutual_info.hpp"
#include "ppmx/pipeline.hpp"
#include "ppmx/profiling.hpp"
#include "ppmx/reports.hpp"
#include "ppmx/serialization.hpp"
#include "ppmx/stability.hpp"
#include "ppmx/synthetic.hpp"
#include "ppmx/text.hpp"
#include "ppmx/time_features.hpp"

namespace fs = std::filesystem;
using namespace ppmx;

namespace {

int cmd_ingest(const std::string& input, const std::string& mapping_path, const std::string& out,
               const std::string& rule_path, bool time_features) {
  const auto mapping = load_json<ColumnMapping>(mapping_path);
  EventLog log = ingest_csv(input, mapping);
  if (!rule_path.empty()) log = apply_labeling(log, load_json<LabelRule>(rule_path));
  if (time_features) log = derive_time_features(log);
  fs::create_directories(out);
  const ColumnMapping normalized = export_mapping(log, mapping.timestamp_format);
  export_csv((fs::path(out) / "events.csv").string(), log, normalized);
  write_json(fs::path(out) / "events.mapping.json", Json(normalized));
  std::size_t n_events = 0;
  for (const auto& t : log.traces()) n_events += t.size();
  Json summary = {{"n_traces", log.size()}, {"n_events", n_events}, {"labeled", log.is_labeled()}};
  if (log.is_labeled()) {
    const LogStats s = compute_log_stats(log);
    summary["positive_ratio"] = s.positive_ratio;
    summary["avg_trace_length"] = s.avg_trace_length;
    summary["n_event_classes"] = s.n_event_classes;
  }
  write_json(fs::path(out) / "ingest_summary.json", summary);
  std::cout << dump_json(summary);
  return 0;
}

int cmd_profile(const std::string& input, const std::string& out, std::size_t bins, std::size_t k) {
  std::ifstream in(input);
  if (!in) throw_data("MissingFile", "cannot open " + input);
  const FeatureMatrix m = read_matrix_csv(in);
  const fs::path dir(out);
  fs::create_directories(dir);
  write_json(dir / "profile.json", Json(profile(m)));
  const auto pearson = pearson_matrix(m);
  write_json(dir / "pearson.json", Json(pearson));
  std::ostringstream pc;
  write_correlation_csv(pc, pearson);
  write_file((dir / "pearson.csv").string(), pc.str());
  const auto cramers = cramers_v_matrix(m);
  write_json(dir / "cramers_v.json", Json(cramers));
  std::ostringstream cc;
  write_correlation_csv(cc, cramers);
  write_file((dir / "cramers_v.csv").string(), cc.str());
  const auto mi = mutual_info(m, bins, k);
  write_json(dir / "mi.json", Json(mi));
  std::cout << "profiled " << m.n_cols() << " columns over " << m.n_rows() << " rows into " << dir.string() << "\n";
  return 0;
}

int report_result(const RunResult& r) {
  if (r.manifest.ok()) {
    std::cout << "run complete: " << r.dir.string() << "\n";
  } else {
    const auto& f = *r.manifest.failure;
    std::cerr << "run failed at stage '" << f.stage << "' [" << f.reason << "]: " << f.message << "\n";
  }
  return r.exit_code();
}

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed, const std::string& out) {
  RunConfig config = load_run_config(config_path);
  if (seed) {
    config.seed = *seed;
    config.gbt.seed = *seed;
  }
  return report_result(run_experiment(config, out));
}

int cmd_grid(const std::string& config_path, const std::string& out) {
  const GridConfig grid = load_grid_config(config_path);
  const GridResult r = run_grid(grid, out);
  for (const auto& [name, run] : r.cells) {
    std::cout << (run.manifest.ok() ? "ok     " : "FAILED ") << name;
    if (!run.manifest.ok()) std::cout << "  [" << run.manifest.failure->stage << ": " << run.manifest.failure->reason << "]";
    std::cout << "\n";
  }
  std::cout << r.n_ok << " ok, " << r.n_failed << " failed\n";
  return 0;
}

int cmd_compare(const std::vector<std::string>& runs, std::size_t k, const std::string& out) {
  if (runs.size() != 2) throw_config("BadArguments", "compare needs exactly two run directories");
  const auto a = load_json<RunFingerprint>(fs::path(runs[0]) / "fingerprint.json");
  const auto b = load_json<RunFingerprint>(fs::path(runs[1]) / "fingerprint.json");
  const StabilityReport rep = compare_runs(a, b, k);
  if (out.empty()) {
    std::cout << dump_json(Json(rep));
  } else {
    fs::create_directories(out);
    write_json(fs::path(out) / "stability.json", Json(rep));
    std::ostringstream csv;
    write_stability_csv(csv, rep);
    write_file((fs::path(out) / "stability.csv").string(), csv.str());
    std::cout << "wrote " << (fs::path(out) / "stability.json").string() << "\n";
  }
  return 0;
}

int cmd_report(const std::string& run_dir) {
  emit_reports(run_dir);
  Manifest m = read_manifest(run_dir);
  write_manifest(run_dir, m);
  std::cout << "reports written to " << run_dir << "\n";
  return 0;
}

int cmd_synth(const std::string& out, std::size_t traces, std::uint64_t seed, bool whole_hours) {
  SyntheticLogConfig sc;
  sc.n_traces = traces;
  sc.seed = seed;
  sc.whole_hours = whole_hours;
  const ColumnMapping mapping = write_synthetic_log(out, "synthetic", sc);
  RunConfig rc;
  rc.log_path = "synthetic.csv";
  rc.mapping = mapping;
  rc.label_rule = synthetic_label_rule();
  Json cfg = to_json(rc);
  cfg["log"]["mapping"] = "synthetic.mapping.json";
  cfg["seeds"] = {1, 2};
  cfg["grid"] = {{"encodings", {"aggregation", "index"}}, {"models", {"logreg", "gbt"}}};
  write_json(fs::path(out) / "config.json", cfg);
  std::cout << "wrote " << (fs::path(out) / "synthetic.csv").string() << " and config.json\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Predictive process monitoring pipeline with explanation reports"};
  app.require_subcommand(1);

  std::string input, mapping, out, rule, config, run_dir;
  std::vector<std::string> runs;
  std::size_t k = kDefaultTopK, bins = kDefaultMiBins, traces = 776;
  std::uint64_t seed_value = 0, synth_seed = 42;
  bool time_features = false, whole_hours = false;

  auto* ingest = app.add_subcommand("ingest", "Read a CSV event log and write a normalized copy");
  ingest->add_option("--input", input, "event log CSV")->required();
  ingest->add_option("--mapping", mapping, "column mapping JSON")->required();
  ingest->add_option("--out", out, "output directory")->required();
  ingest->add_option("--label-rule", rule, "label rule JSON");
  ingest->add_flag("--time-features", time_features, "derive time features");

  auto* prof = app.add_subcommand("profile", "Profile an encoded matrix CSV (last column = label)");
  prof->add_option("--input", input, "matrix CSV")->required();
  prof->add_option("--out", out, "output directory")->required();
  prof->add_option("--bins", bins, "quantile bins for mutual information");
  prof->add_option("--k", k, "top-k");

  auto* run = app.add_subcommand("run", "Run one experiment");
  run->add_option("--config", config, "config JSON")->required();
  auto* seed_opt = run->add_option("--seed", seed_value, "seed (overrides the config)");
  run->add_option("--out", out, "run directory")->required();

  auto* grid = app.add_subcommand("grid", "Run every legal cell of a grid");
  grid->add_option("--config", config, "config JSON with a grid section")->required();
  grid->add_option("--out", out, "grid directory")->required();

  auto* compare = app.add_subcommand("compare", "Compare the explanations of two runs");
  compare->add_option("--runs", runs, "two run directories")->required()->expected(2);
  compare->add_option("--k", k, "top-k");
  compare->add_option("--out", out, "write stability.json/csv here instead of stdout");

  auto* report = app.add_subcommand("report", "Regenerate charts and summary of a run");
  report->add_option("--run", run_dir, "run directory")->required();

  auto* synth = app.add_subcommand("synth", "Write a synthetic hospital log and a starter config");
  synth->add_option("--out", out, "output directory")->required();
  synth->add_option("--traces", traces, "number of cases");
  synth->add_option("--seed", synth_seed, "generator seed");
  synth->add_flag("--whole-hours", whole_hours, "put every timestamp on the hour");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(ErrorCode::kConfig);
  }

  try {
    if (*ingest) return cmd_ingest(input, mapping, out, rule, time_features);
    if (*prof) return cmd_profile(input, out, bins, k);
    if (*run) return cmd_run(config, *seed_opt ? std::optional<std::uint64_t>(seed_value) : std::nullopt, out);
    if (*grid) return cmd_grid(config, out);
    if (*compare) return cmd_compare(runs, k, out);
    if (*report) return cmd_report(run_dir);
    if (*synth) return cmd_synth(out, traces, synth_seed, whole_hours);
  } catch (const Error& e) {
    std::cerr << to_string(e.code()) << " error [" << e.reason() << "]: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
