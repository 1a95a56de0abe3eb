#include "ppmx/reports.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "ppmx/artifacts.hpp"
#include "ppmx/config.hpp"
#include "ppmx/error.hpp"
#include "ppmx/metrics.hpp"
#include "ppmx/pfi.hpp"
#include "ppmx/serialization.hpp"
#include "ppmx/text.hpp"

namespace ppmx {

namespace fs = std::filesystem;

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fixed(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string md_number(const std::optional<double>& v) { return v ? fixed(*v, 4) : "n/a"; }

constexpr int kLabelWidth = 220;
constexpr int kBarWidth = 360;
constexpr int kRowHeight = 24;

}  // namespace

std::string bar_chart_svg(const ImportanceVector& iv, std::size_t k, const std::string& title) {
  const auto top = iv.top_k(k);
  double scale = 0.0;
  for (auto i : top) scale = std::max(scale, std::abs(iv.scores[i]));
  const int width = kLabelWidth + kBarWidth + 100;
  const int height = 40 + kRowHeight * static_cast<int>(top.size()) + 10;
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
    << "\" data-criterion=\"" << xml_escape(iv.criterion) << "\">\n";
  s << "  <text x=\"10\" y=\"22\" font-family=\"sans-serif\" font-size=\"14\">" << xml_escape(title) << "</text>\n";
  for (std::size_t r = 0; r < top.size(); ++r) {
    const std::size_t i = top[r];
    const double v = iv.scores[i];
    const double len = scale > 0 ? std::abs(v) / scale * kBarWidth : 0.0;
    const int y = 36 + kRowHeight * static_cast<int>(r);
    const bool negative = v < 0 || (!iv.signs.empty() && iv.signs[i] < 0);
    s << "  <text x=\"" << kLabelWidth - 6 << "\" y=\"" << y + 16
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" << xml_escape(iv.columns[i])
      << "</text>\n";
    s << "  <rect class=\"bar\" x=\"" << kLabelWidth << "\" y=\"" << y + 3 << "\" width=\"" << fixed(len)
      << "\" height=\"" << kRowHeight - 6 << "\" fill=\"" << (negative ? "#d62728" : "#1f77b4")
      << "\" data-feature=\"" << xml_escape(iv.columns[i]) << "\" data-value=\"" << format_double(v) << "\"/>\n";
    s << "  <text x=\"" << kLabelWidth + static_cast<int>(len) + 6 << "\" y=\"" << y + 16
      << "\" font-family=\"sans-serif\" font-size=\"11\">" << fixed(v, 4) << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

namespace {

std::vector<std::size_t> feature_indices(const AttributionSet& set, const std::vector<std::string>& features) {
  std::vector<std::size_t> idx;
  for (const auto& f : features) {
    auto it = std::find(set.columns.begin(), set.columns.end(), f);
    if (it == set.columns.end()) throw_data("UnknownColumn", "attribution set has no column " + f);
    idx.push_back(static_cast<std::size_t>(it - set.columns.begin()));
  }
  return idx;
}

}  // namespace

std::string shap_summary_svg(const AttributionSet& set, const std::vector<std::string>& features,
                             const std::string& title) {
  const auto idx = feature_indices(set, features);
  const std::size_t d = set.columns.size();
  double max_abs = 0.0;
  for (const auto& a : set.attributions)
    for (auto c : idx) max_abs = std::max(max_abs, std::abs(a.phi[c]));
  if (max_abs == 0.0) max_abs = 1.0;
  const int plot = 420, left = kLabelWidth, row_h = 30;
  const int width = left + plot + 40;
  const int height = 50 + row_h * static_cast<int>(idx.size()) + 20;
  const double cx = left + plot / 2.0;
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
  s << "  <text x=\"10\" y=\"22\" font-family=\"sans-serif\" font-size=\"14\">" << xml_escape(title) << "</text>\n";
  s << "  <line x1=\"" << fixed(cx) << "\" y1=\"36\" x2=\"" << fixed(cx) << "\" y2=\"" << height - 10
    << "\" stroke=\"#999\"/>\n";
  for (std::size_t r = 0; r < idx.size(); ++r) {
    const std::size_t c = idx[r];
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (std::size_t i = 0; i < set.attributions.size(); ++i) {
      const double v = set.feature_values[i * d + c];
      lo = first ? v : std::min(lo, v);
      hi = first ? v : std::max(hi, v);
      first = false;
    }
    const int y = 50 + row_h * static_cast<int>(r);
    s << "  <text x=\"" << left - 6 << "\" y=\"" << y + 4
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" << xml_escape(set.columns[c])
      << "</text>\n";
    for (std::size_t i = 0; i < set.attributions.size(); ++i) {
      const double phi = set.attributions[i].phi[c];
      const double v = set.feature_values[i * d + c];
      const double t = hi > lo ? (v - lo) / (hi - lo) : 0.5;
      const int red = static_cast<int>(std::lround(30 + 200 * t));
      const int blue = static_cast<int>(std::lround(230 - 200 * t));
      // Deterministic vertical jitter from the row index.
      const double jitter = static_cast<double>((i * 7919) % 17) - 8.0;
      s << "  <circle cx=\"" << fixed(cx + phi / max_abs * (plot / 2.0 - 10)) << "\" cy=\"" << fixed(y + jitter * 0.8)
        << "\" r=\"2.5\" fill=\"rgb(" << red << ",60," << blue << ")\" fill-opacity=\"0.7\"/>\n";
    }
  }
  s << "</svg>\n";
  return s.str();
}

void write_shap_summary_csv(std::ostream& out, const AttributionSet& set, const std::vector<std::string>& features) {
  const auto idx = feature_indices(set, features);
  const std::size_t d = set.columns.size();
  write_csv_row(out, {"feature", "case_id", "prefix_length", "value", "phi"});
  for (auto c : idx) {
    for (std::size_t i = 0; i < set.attributions.size(); ++i) {
      write_csv_row(out, {set.columns[c], set.rows[i].case_id, std::to_string(set.rows[i].prefix_length),
                          format_double(set.feature_values[i * d + c]), format_double(set.attributions[i].phi[c])});
    }
  }
}

void write_stability_csv(std::ostream& out, const StabilityReport& report) {
  write_csv_row(out, {"bucket", "method", "k", "seed_a", "seed_b", "jaccard", "spearman", "mean_abs_diff", "n_shared"});
  for (const auto& e : report.entries) {
    write_csv_row(out, {e.bucket, e.method, std::to_string(report.k), std::to_string(report.seed_a),
                        std::to_string(report.seed_b), format_double(e.metrics.jaccard),
                        format_double(e.metrics.spearman),
                        e.metrics.mean_abs_diff ? format_double(*e.metrics.mean_abs_diff) : "",
                        std::to_string(e.metrics.n_shared)});
  }
}

namespace {

// First existing file among the candidates.
std::optional<fs::path> first_existing(const fs::path& dir, std::initializer_list<const char*> names) {
  for (const char* n : names)
    if (fs::exists(dir / n)) return dir / n;
  return std::nullopt;
}

std::string top_list(const ImportanceVector& iv, std::size_t k) {
  std::string s;
  for (auto i : iv.top_k(k)) {
    if (!s.empty()) s += ", ";
    s += "`" + iv.columns[i] + "` (" + fixed(iv.scores[i], 4) + ")";
  }
  return s;
}

}  // namespace

void emit_reports(const fs::path& run_dir) {
  const RunConfig config = run_config_from_json(read_json(run_dir / "config.json"));
  const Json buckets = read_json(run_dir / "buckets.json");
  const std::size_t k = config.top_k;

  std::ostringstream md;
  md << "# Run summary\n\n";
  md << "| setting | value |\n|---|---|\n";
  md << "| log | `" << fs::path(config.log_path).filename().string() << "` |\n";
  md << "| encoding | " << to_string(config.encoding) << " |\n";
  md << "| bucketing | " << to_string(config.bucketing) << " |\n";
  md << "| model | " << to_string(config.model) << " |\n";
  md << "| prefix gap / max length | " << config.gap << " / "
     << (config.max_length == kUnboundedPrefixLength ? std::string("unbounded") : std::to_string(config.max_length))
     << " |\n";
  md << "| split | " << to_string(config.split) << " " << fixed(config.train_fraction, 2) << " |\n";
  md << "| seed | " << config.seed << " |\n";
  md << "| config hash | `" << sha256_hex(to_json(config).dump()) << "` |\n";
  if (config.unsafe_pairings) md << "| unsafe pairings | **enabled** |\n";
  md << "\n";

  if (fs::exists(run_dir / "log_stats.json")) {
    const Json st = read_json(run_dir / "log_stats.json");
    md << "## Event log\n\n";
    md << "| traces | shortest | avg length | longest | variants | positive ratio | event classes |\n";
    md << "|---|---|---|---|---|---|---|\n";
    md << "| " << st["n_traces"].get<std::size_t>() << " | " << st["shortest_trace"].get<std::size_t>() << " | "
       << fixed(st["avg_trace_length"].get<double>()) << " | " << st["longest_trace"].get<std::size_t>() << " | "
       << st["n_trace_variants"].get<std::size_t>() << " | " << fixed(st["positive_ratio"].get<double>(), 3) << " | "
       << st["n_event_classes"].get<std::size_t>() << " |\n\n";
  }

  md << "## Buckets\n\n| bucket | train size | test size | positive ratio | trained |\n|---|---|---|---|---|\n";
  for (const auto& b : buckets) {
    md << "| " << b["key"]["name"].get<std::string>() << " | " << b["size"].get<std::size_t>() << " | "
       << b.value("test_size", std::size_t{0}) << " | " << fixed(b["positive_ratio"].get<double>(), 3) << " | "
       << (b["trainable"].get<bool>() ? "yes" : "no (" + b["skip_reason"].get<std::string>() + ")") << " |\n";
  }
  md << "\n";

  for (const auto& b : buckets) {
    if (!b["trainable"].get<bool>()) continue;
    const std::string name = b["key"]["name"].get<std::string>();
    const fs::path bdir = run_dir / ("bucket_" + name);
    if (!fs::exists(bdir / "model.json")) continue;
    md << "## Bucket `" << name << "`\n\n";
    const auto ev_train = load_json<EvalReport>(bdir / "eval_train.json");
    md << "| split | rows | positives | AUC | accuracy | log-loss |\n|---|---|---|---|---|---|\n";
    md << "| train | " << ev_train.n_rows << " | " << ev_train.n_positive << " | " << md_number(ev_train.auc) << " | "
       << fixed(ev_train.accuracy, 4) << " | " << fixed(ev_train.log_loss, 4) << " |\n";
    if (fs::exists(bdir / "eval_test.json")) {
      const auto ev = load_json<EvalReport>(bdir / "eval_test.json");
      md << "| test | " << ev.n_rows << " | " << ev.n_positive << " | " << md_number(ev.auc) << " | "
         << fixed(ev.accuracy, 4) << " | " << fixed(ev.log_loss, 4) << " |\n";
    }
    md << "\n";

    const auto mi = load_json<MutualInfoReport>(bdir / "mi.json");
    md << "- MI top-" << k << ": " << top_list(mi.scores, k) << "\n";
    for (std::size_t i = 0; i < mi.extra_columns.size(); ++i)
      md << "- MI of `" << mi.extra_columns[i] << "` (not a model input): " << fixed(mi.extra_scores[i], 4) << "\n";

    struct Chart {
      XaiMethod method;
      std::optional<fs::path> source;
      bool is_pfi;
    };
    const std::vector<Chart> charts = {
        {XaiMethod::kModelSpecific, first_existing(bdir, {"importance_lr_coef.json", "importance_gbt_gain.json"}), false},
        {XaiMethod::kPfi, first_existing(bdir, {"pfi_test.json", "pfi_train.json"}), true},
        {XaiMethod::kShap, first_existing(bdir, {"shap_global_test.json", "shap_global_train.json"}), false},
    };
    for (const auto& c : charts) {
      if (!config.has_xai(c.method) || !c.source) continue;
      ImportanceVector iv;
      if (c.is_pfi) iv = load_json<PfiReport>(*c.source).importance();
      else if (c.method == XaiMethod::kShap) iv = load_json<GlobalShapReport>(*c.source).importance;
      else iv = load_json<ImportanceVector>(*c.source);
      const std::string title = std::string(to_string(c.method)) + " (" + iv.criterion + ", " +
                                c.source->stem().string() + ") top-" + std::to_string(k) + ", bucket " + name;
      write_file((bdir / ("bar_" + std::string(to_string(c.method)) + ".svg")).string(), bar_chart_svg(iv, k, title));
      md << "- " << to_string(c.method) << " [" << c.source->filename().string() << "] top-" << k << ": "
         << top_list(iv, k) << "\n";
    }
    if (config.has_xai(XaiMethod::kShap)) {
      if (auto src = first_existing(bdir, {"shap_test.json", "shap_train.json"})) {
        const auto set = load_json<AttributionSet>(*src);
        const auto global = shap_global(set);
        const auto features = global.importance.top_k_names(k);
        std::ostringstream csv;
        write_shap_summary_csv(csv, set, features);
        write_file((bdir / "shap_summary.csv").string(), csv.str());
        write_file((bdir / "shap_summary.svg").string(),
                   shap_summary_svg(set, features, "SHAP summary (" + set.explained_split + "), bucket " + name));
      }
    }
    if (fs::exists(bdir / "collinearity.json")) {
      const Json flags = read_json(bdir / "collinearity.json");
      md << "- collinear pairs in top-" << k << " sets (|r| >= " << fixed(config.corr_threshold, 2)
         << "): " << flags.size() << "\n";
      std::map<std::pair<std::string, std::string>, double> pairs;
      for (const auto& f : flags) pairs[{f["column_a"].get<std::string>(), f["column_b"].get<std::string>()}] = f["abs_correlation"].get<double>();
      for (const auto& [p, v] : pairs) md << "  - `" << p.first << "` ~ `" << p.second << "`: " << fixed(v, 4) << "\n";
    }
    if (fs::exists(bdir / "agreement.json")) {
      md << "\n| method | overlap@" << k << " with MI | rank correlation |\n|---|---|---|\n";
      for (const auto& a : read_json(bdir / "agreement.json")) {
        const auto rep = a.get<AgreementReport>();
        md << "| " << rep.method << " | " << fixed(rep.overlap, 2) << " | " << md_number(rep.rank_correlation)
           << " |\n";
      }
    }
    md << "\n";
  }
  write_file((run_dir / "summary.md").string(), md.str());
}

}  // namespace ppmx
