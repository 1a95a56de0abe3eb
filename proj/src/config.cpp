#include "ppmx/config.hpp"

#include <set>

#include "ppmx/artifacts.hpp"
#include "ppmx/error.hpp"
#include "ppmx/serialization.hpp"

namespace ppmx {

const char* to_string(ModelKind k) { return k == ModelKind::kLogReg ? "logreg" : "gbt"; }

ModelKind parse_model_kind(const std::string& text) {
  if (text == "logreg" || text == "lr") return ModelKind::kLogReg;
  if (text == "gbt" || text == "xgboost") return ModelKind::kGbt;
  throw_config("BadModel", "unknown model kind '" + text + "'");
}

const char* to_string(XaiMethod m) {
  switch (m) {
    case XaiMethod::kModelSpecific: return "model_specific";
    case XaiMethod::kPfi: return "pfi";
    case XaiMethod::kShap: return "shap";
  }
  return "";
}

XaiMethod parse_xai_method(const std::string& text) {
  if (text == "model_specific") return XaiMethod::kModelSpecific;
  if (text == "pfi") return XaiMethod::kPfi;
  if (text == "shap") return XaiMethod::kShap;
  throw_config("BadXai", "unknown explanation method '" + text + "'");
}

const char* to_string(SplitKind k) { return k == SplitKind::kTemporal ? "temporal" : "random"; }

SplitKind parse_split_kind(const std::string& text) {
  if (text == "temporal") return SplitKind::kTemporal;
  if (text == "random") return SplitKind::kRandom;
  throw_config("BadSplit", "unknown split kind '" + text + "'");
}

bool RunConfig::has_xai(XaiMethod m) const { return std::find(xai.begin(), xai.end(), m) != xai.end(); }

namespace {

bool legal_pairing(EncodingKind e, BucketStrategy b) {
  return (e == EncodingKind::kIndex && b == BucketStrategy::kPrefixLength) ||
         (e == EncodingKind::kAggregation && b == BucketStrategy::kSingle);
}

void check_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw_config("BadConfig", where + " must be a JSON object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items())
    if (!ok.count(key)) throw_config("UnknownKey", "unknown key '" + key + "' in " + where);
}

template <typename T>
void take(const Json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end()) {
    try {
      out = it->template get<T>();
    } catch (const Json::exception& e) {
      throw_config("BadValue", std::string("bad value for '") + key + "': " + e.what());
    }
  }
}

}  // namespace

void validate(const RunConfig& c) {
  if (!c.unsafe_pairings && !legal_pairing(c.encoding, c.bucketing)) {
    throw_config("IllegalPairing", std::string("encoding '") + to_string(c.encoding) + "' cannot be combined with '" +
                                       to_string(c.bucketing) + "' bucketing (use index+prefix_length or "
                                       "aggregation+single, or enable unsafe_pairings)");
  }
  if (c.log_path.empty()) throw_config("MissingLog", "log.path is required");
  if (c.gap == 0) throw_config("BadPrefixing", "prefix gap must be >= 1");
  if (c.max_length == 0) throw_config("BadPrefixing", "prefix max_length must be >= 1");
  if (!(c.train_fraction > 0.0 && c.train_fraction < 1.0)) throw_config("BadSplit", "train_fraction must be in (0, 1)");
  if (c.pfi_iterations < 1) throw_config("BadValue", "pfi.n_iter must be >= 1");
  if (c.shap_background == 0) throw_config("BadValue", "shap.background_size must be >= 1");
  if (c.mi_bins < 2) throw_config("BadValue", "profiling.mi_bins must be >= 2");
  if (c.top_k == 0) throw_config("BadValue", "profiling.top_k must be >= 1");
  if (c.logreg.l2 < 0 || c.logreg.max_iterations < 1) throw_config("BadTrainConfig", "bad logreg settings");
  if (c.gbt.n_trees < 1 || c.gbt.max_depth < 1 || c.gbt.learning_rate <= 0 || c.gbt.subsample <= 0 ||
      c.gbt.subsample > 1 || c.gbt.colsample <= 0 || c.gbt.colsample > 1) {
    throw_config("BadTrainConfig", "bad gbt settings");
  }
}

Json to_json(const RunConfig& c) {
  Json xai = Json::array();
  for (auto m : c.xai) xai.push_back(to_string(m));
  return {
      {"log", {{"path", c.log_path}, {"mapping", c.mapping}}},
      {"label_rule", c.label_rule},
      {"min_trace_length", c.min_trace_length},
      {"time_features", c.time_features},
      {"split", {{"kind", to_string(c.split)}, {"train_fraction", c.train_fraction}}},
      {"prefix",
       {{"gap", c.gap}, {"max_length", c.max_length == kUnboundedPrefixLength ? Json(nullptr) : Json(c.max_length)}}},
      {"bucketing", to_string(c.bucketing)},
      {"encoding", to_string(c.encoding)},
      {"min_bucket_size", c.min_bucket_size},
      {"model", {{"kind", to_string(c.model)}, {"logreg", c.logreg}, {"gbt", c.gbt}}},
      {"xai", xai},
      {"pfi", {{"n_iter", c.pfi_iterations}}},
      {"shap", {{"background_size", c.shap_background}, {"max_instances", c.shap_max_instances}}},
      {"profiling", {{"mi_bins", c.mi_bins}, {"top_k", c.top_k}, {"corr_threshold", c.corr_threshold}}},
      {"seeds", {c.seed}},
      {"unsafe_pairings", c.unsafe_pairings},
  };
}

RunConfig run_config_from_json(const Json& j, const std::filesystem::path& base_dir) {
  check_keys(j,
             {"log", "label_rule", "min_trace_length", "time_features", "split", "prefix", "bucketing", "encoding",
              "min_bucket_size", "model", "xai", "pfi", "shap", "profiling", "seeds", "seed", "unsafe_pairings", "grid",
              "output_dir"},
             "config");
  RunConfig c;
  try {
    const Json& log = j.at("log");
    check_keys(log, {"path", "mapping"}, "log");
    std::filesystem::path path = log.at("path").get<std::string>();
    if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
    c.log_path = path.lexically_normal().generic_string();
    if (auto it = log.find("mapping"); it != log.end()) {
      if (it->is_string()) {
        std::filesystem::path mp = it->get<std::string>();
        if (mp.is_relative() && !base_dir.empty()) mp = base_dir / mp;
        c.mapping = read_json(mp).get<ColumnMapping>();
      } else {
        c.mapping = it->get<ColumnMapping>();
      }
    }
    if (auto it = j.find("label_rule"); it != j.end() && !it->is_null()) c.label_rule = it->get<LabelRule>();
  } catch (const Error&) {
    throw;
  } catch (const Json::exception& e) {
    throw_config("BadConfig", std::string("bad log or label_rule section: ") + e.what());
  }
  take(j, "min_trace_length", c.min_trace_length);
  take(j, "time_features", c.time_features);
  if (auto it = j.find("split"); it != j.end()) {
    check_keys(*it, {"kind", "train_fraction"}, "split");
    if (it->contains("kind")) c.split = parse_split_kind(it->at("kind").get<std::string>());
    take(*it, "train_fraction", c.train_fraction);
  }
  if (auto it = j.find("prefix"); it != j.end()) {
    check_keys(*it, {"gap", "max_length"}, "prefix");
    take(*it, "gap", c.gap);
    if (it->contains("max_length")) {
      const Json& k = it->at("max_length");
      c.max_length = k.is_null() ? kUnboundedPrefixLength : k.get<std::size_t>();
    }
  }
  if (auto it = j.find("bucketing"); it != j.end()) c.bucketing = parse_bucket_strategy(it->get<std::string>());
  if (auto it = j.find("encoding"); it != j.end()) c.encoding = parse_encoding_kind(it->get<std::string>());
  take(j, "min_bucket_size", c.min_bucket_size);
  if (auto it = j.find("model"); it != j.end()) {
    check_keys(*it, {"kind", "logreg", "gbt"}, "model");
    if (it->contains("kind")) c.model = parse_model_kind(it->at("kind").get<std::string>());
    if (it->contains("logreg")) {
      check_keys(it->at("logreg"), {"l2", "tolerance", "max_iterations"}, "model.logreg");
      take(*it, "logreg", c.logreg);
    }
    if (it->contains("gbt")) {
      check_keys(it->at("gbt"),
                 {"n_trees", "max_depth", "learning_rate", "l2", "min_split_gain", "min_child_cover", "subsample",
                  "colsample"},
                 "model.gbt");
      take(*it, "gbt", c.gbt);
    }
  }
  if (auto it = j.find("xai"); it != j.end()) {
    c.xai.clear();
    for (const auto& m : *it) {
      const auto method = parse_xai_method(m.get<std::string>());
      if (!c.has_xai(method)) c.xai.push_back(method);
    }
  }
  if (auto it = j.find("pfi"); it != j.end()) {
    check_keys(*it, {"n_iter"}, "pfi");
    take(*it, "n_iter", c.pfi_iterations);
  }
  if (auto it = j.find("shap"); it != j.end()) {
    check_keys(*it, {"background_size", "max_instances"}, "shap");
    take(*it, "background_size", c.shap_background);
    take(*it, "max_instances", c.shap_max_instances);
  }
  if (auto it = j.find("profiling"); it != j.end()) {
    check_keys(*it, {"mi_bins", "top_k", "corr_threshold"}, "profiling");
    take(*it, "mi_bins", c.mi_bins);
    take(*it, "top_k", c.top_k);
    take(*it, "corr_threshold", c.corr_threshold);
  }
  if (auto it = j.find("seeds"); it != j.end()) {
    const auto seeds = it->get<std::vector<std::uint64_t>>();
    if (!seeds.empty()) c.seed = seeds.front();
  }
  take(j, "seed", c.seed);
  take(j, "unsafe_pairings", c.unsafe_pairings);
  c.gbt.seed = c.seed;
  validate(c);
  return c;
}

std::string settings_text(const RunConfig& config) {
  Json j = to_json(config);
  j.erase("seeds");
  return j.dump();
}

std::string settings_hash(const RunConfig& config) { return sha256_hex(settings_text(config)); }

GridConfig grid_config_from_json(const Json& j, const std::filesystem::path& base_dir) {
  GridConfig g;
  g.base = j;
  g.base.erase("grid");
  g.base.erase("seeds");
  g.base.erase("seed");
  g.base_dir = base_dir;
  // Template must be a valid run on its own (pairing aside).
  {
    Json probe = g.base;
    probe["unsafe_pairings"] = true;
    (void)run_config_from_json(probe, base_dir);
  }
  const Json grid = j.value("grid", Json::object());
  check_keys(grid, {"encodings", "bucketings", "models", "cell_overrides"}, "grid");
  for (const auto& e : grid.value("encodings", Json::array())) g.encodings.push_back(parse_encoding_kind(e.get<std::string>()));
  for (const auto& b : grid.value("bucketings", Json::array()))
    g.bucketings.push_back(parse_bucket_strategy(b.get<std::string>()));
  for (const auto& m : grid.value("models", Json::array())) g.models.push_back(parse_model_kind(m.get<std::string>()));
  for (const auto& o : grid.value("cell_overrides", Json::array())) {
    check_keys(o, {"match", "set"}, "grid.cell_overrides[]");
    check_keys(o.value("match", Json::object()), {"encoding", "bucketing", "model", "seed"}, "grid.cell_overrides[].match");
    g.overrides.push_back(o);
  }
  if (auto it = j.find("seeds"); it != j.end()) g.seeds = it->get<std::vector<std::uint64_t>>();
  else if (auto s = j.find("seed"); s != j.end()) g.seeds = {s->get<std::uint64_t>()};

  const RunConfig probe = [&] {
    Json p = g.base;
    p["unsafe_pairings"] = true;
    return run_config_from_json(p, base_dir);
  }();
  if (g.encodings.empty()) g.encodings = {probe.encoding};
  if (g.models.empty()) g.models = {probe.model};
  if (g.seeds.empty()) g.seeds = {0};
  return g;
}

std::vector<GridCell> expand_grid(const GridConfig& g) {
  const bool unsafe = g.base.value("unsafe_pairings", false);
  std::vector<GridCell> cells;
  for (auto enc : g.encodings) {
    std::vector<BucketStrategy> buckets = g.bucketings;
    if (buckets.empty())
      buckets = {enc == EncodingKind::kIndex ? BucketStrategy::kPrefixLength : BucketStrategy::kSingle};
    for (auto bkt : buckets) {
      if (!unsafe && !legal_pairing(enc, bkt)) continue;
      for (auto model : g.models) {
        for (auto seed : g.seeds) {
          Json j = g.base;
          j["encoding"] = to_string(enc);
          j["bucketing"] = to_string(bkt);
          if (!j.contains("model")) j["model"] = Json::object();
          j["model"]["kind"] = to_string(model);
          j["seeds"] = {seed};
          for (const auto& o : g.overrides) {
            const Json match = o.value("match", Json::object());
            auto mismatch = [&](const char* key, const std::string& value) {
              return match.contains(key) && match.at(key).get<std::string>() != value;
            };
            if (mismatch("encoding", to_string(enc)) || mismatch("bucketing", to_string(bkt)) ||
                mismatch("model", to_string(model)))
              continue;
            if (match.contains("seed") && match.at("seed").get<std::uint64_t>() != seed) continue;
            j.merge_patch(o.value("set", Json::object()));
          }
          GridCell cell;
          cell.name = std::string(to_string(enc)) + "__" + to_string(bkt) + "__" + to_string(model) + "__seed" +
                      std::to_string(seed);
          cell.config = run_config_from_json(j, g.base_dir);
          cells.push_back(std::move(cell));
        }
      }
    }
  }
  return cells;
}

namespace {

Json read_config_file(const std::filesystem::path& path) {
  if (!std::filesystem::is_regular_file(path)) throw_config("MissingConfig", "no config file at " + path.string());
  return read_json(path);
}

}  // namespace

RunConfig load_run_config(const std::filesystem::path& path) {
  return run_config_from_json(read_config_file(path), std::filesystem::absolute(path).parent_path());
}

GridConfig load_grid_config(const std::filesystem::path& path) {
  return grid_config_from_json(read_config_file(path), std::filesystem::absolute(path).parent_path());
}

}  // namespace ppmx
