#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ppmx/bucketing.hpp"
#include "ppmx/csv_io.hpp"
#include "ppmx/encoding.hpp"
#include "ppmx/gbt.hpp"
#include "ppmx/labeling.hpp"
#include "ppmx/logreg.hpp"
#include "ppmx/prefixing.hpp"

namespace ppmx {

enum class ModelKind { kLogReg, kGbt };
enum class XaiMethod { kModelSpecific, kPfi, kShap };
enum class SplitKind { kTemporal, kRandom };

const char* to_string(ModelKind k);
ModelKind parse_model_kind(const std::string& text);
const char* to_string(XaiMethod m);
XaiMethod parse_xai_method(const std::string& text);
const char* to_string(SplitKind k);
SplitKind parse_split_kind(const std::string& text);

struct RunConfig {
  std::string log_path;
  ColumnMapping mapping;
  std::optional<LabelRule> label_rule;  // required unless the mapping has a label column
  std::size_t min_trace_length = 1;
  bool time_features = true;

  SplitKind split = SplitKind::kTemporal;
  double train_fraction = 0.8;

  std::size_t gap = 5;
  std::size_t max_length = 20;  // kUnboundedPrefixLength for no cap

  BucketStrategy bucketing = BucketStrategy::kSingle;
  EncodingKind encoding = EncodingKind::kAggregation;
  std::size_t min_bucket_size = 30;

  ModelKind model = ModelKind::kLogReg;
  LogRegConfig logreg;
  GbtConfig gbt;

  std::vector<XaiMethod> xai = {XaiMethod::kModelSpecific, XaiMethod::kPfi, XaiMethod::kShap};
  int pfi_iterations = 10;
  std::size_t shap_background = 100;
  std::size_t shap_max_instances = 200;

  std::size_t mi_bins = 10;
  std::size_t top_k = 5;
  double corr_threshold = 0.9;

  std::uint64_t seed = 0;
  bool unsafe_pairings = false;

  bool has_xai(XaiMethod m) const;
};

// ConfigError on an illegal encoding/bucketing pairing (unless unsafe
// pairings are enabled) or out-of-range values.
void validate(const RunConfig& config);

nlohmann::json to_json(const RunConfig& config);
// Strict: unknown keys are a ConfigError. Relative log paths resolve
// against `base_dir`.
RunConfig run_config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});

// Canonical settings (everything but the seed) and their SHA-256.
std::string settings_text(const RunConfig& config);
std::string settings_hash(const RunConfig& config);

struct GridCell {
  std::string name;
  RunConfig config;
};

// A run template plus the dimensions to sweep.
struct GridConfig {
  nlohmann::json base;  // run config JSON without "grid"/"seeds"
  std::filesystem::path base_dir;
  std::vector<EncodingKind> encodings;
  std::vector<BucketStrategy> bucketings;  // empty: each encoding's legal bucketing
  std::vector<ModelKind> models;
  std::vector<std::uint64_t> seeds;
  // Each override is {"match": {encoding?, bucketing?, model?, seed?}, "set": <merge patch>}.
  std::vector<nlohmann::json> overrides;
};

GridConfig grid_config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
// Legal cells in (encoding, bucketing, model, seed) order; illegal pairings
// are dropped unless the template enables unsafe pairings.
std::vector<GridCell> expand_grid(const GridConfig& grid);

// Reads a config file; the "seeds" list's first entry becomes the seed.
RunConfig load_run_config(const std::filesystem::path& path);
GridConfig load_grid_config(const std::filesystem::path& path);

}  // namespace ppmx
