#pragma once

// JSON forms of the domain types. Doubles are written in shortest
// round-trip form, so a save/load cycle reproduces every bit.

#include <filesystem>
#include <optional>

#include <json.hpp>

#include "ppmx/bucketing.hpp"
#include "ppmx/correlation.hpp"
#include "ppmx/csv_io.hpp"
#include "ppmx/encoding.hpp"
#include "ppmx/event_log.hpp"
#include "ppmx/gbt.hpp"
#include "ppmx/importance.hpp"
#include "ppmx/labeling.hpp"
#include "ppmx/logreg.hpp"
#include "ppmx/metrics.hpp"
#include "ppmx/mutual_info.hpp"
#include "ppmx/pfi.hpp"
#include "ppmx/profiling.hpp"
#include "ppmx/shap.hpp"
#include "ppmx/stability.hpp"

NLOHMANN_JSON_NAMESPACE_BEGIN
template <typename T>
struct adl_serializer<std::optional<T>> {
  static void to_json(json& j, const std::optional<T>& v) {
    if (v) j = *v;
    else j = nullptr;
  }
  static void from_json(const json& j, std::optional<T>& v) {
    if (j.is_null()) v.reset();
    else v = j.get<T>();
  }
};
NLOHMANN_JSON_NAMESPACE_END

namespace ppmx {

using Json = nlohmann::json;

void to_json(Json& j, const AttributeSpec& v);
void from_json(const Json& j, AttributeSpec& v);
void to_json(Json& j, const Schema& v);
void from_json(const Json& j, Schema& v);
void to_json(Json& j, const ColumnMapping& v);
void from_json(const Json& j, ColumnMapping& v);
void to_json(Json& j, const LabelRule& v);
void from_json(const Json& j, LabelRule& v);
void to_json(Json& j, const BucketKey& v);
void from_json(const Json& j, BucketKey& v);
void to_json(Json& j, const BucketSummary& v);
void from_json(const Json& j, BucketSummary& v);
void to_json(Json& j, const FeatureDescriptor& v);
void from_json(const Json& j, FeatureDescriptor& v);
void to_json(Json& j, const RowId& v);
void from_json(const Json& j, RowId& v);
void to_json(Json& j, const EncoderSpec& v);
void from_json(const Json& j, EncoderSpec& v);
void to_json(Json& j, const LogRegConfig& v);
void from_json(const Json& j, LogRegConfig& v);
void to_json(Json& j, const LinearModel& v);
void from_json(const Json& j, LinearModel& v);
void to_json(Json& j, const GbtConfig& v);
void from_json(const Json& j, GbtConfig& v);
void to_json(Json& j, const TreeNode& v);
void from_json(const Json& j, TreeNode& v);
void to_json(Json& j, const RegressionTree& v);
void from_json(const Json& j, RegressionTree& v);
void to_json(Json& j, const TreeEnsemble& v);
void from_json(const Json& j, TreeEnsemble& v);
void to_json(Json& j, const EvalReport& v);
void from_json(const Json& j, EvalReport& v);
void to_json(Json& j, const ImportanceVector& v);
void from_json(const Json& j, ImportanceVector& v);
void to_json(Json& j, const PfiReport& v);
void from_json(const Json& j, PfiReport& v);
void to_json(Json& j, const Attribution& v);
void from_json(const Json& j, Attribution& v);
void to_json(Json& j, const AttributionSet& v);
void from_json(const Json& j, AttributionSet& v);
void to_json(Json& j, const GlobalShapReport& v);
void from_json(const Json& j, GlobalShapReport& v);
void to_json(Json& j, const NumericSummary& v);
void from_json(const Json& j, NumericSummary& v);
void to_json(Json& j, const ColumnProfile& v);
void from_json(const Json& j, ColumnProfile& v);
void to_json(Json& j, const ProfileReport& v);
void from_json(const Json& j, ProfileReport& v);
void to_json(Json& j, const CorrelationMatrix& v);
void from_json(const Json& j, CorrelationMatrix& v);
void to_json(Json& j, const MutualInfoReport& v);
void from_json(const Json& j, MutualInfoReport& v);
void to_json(Json& j, const RunFingerprint& v);
void from_json(const Json& j, RunFingerprint& v);
void to_json(Json& j, const PairMetrics& v);
void from_json(const Json& j, PairMetrics& v);
void to_json(Json& j, const StabilityEntry& v);
void from_json(const Json& j, StabilityEntry& v);
void to_json(Json& j, const StabilityReport& v);
void from_json(const Json& j, StabilityReport& v);
void to_json(Json& j, const AgreementReport& v);
void from_json(const Json& j, AgreementReport& v);
void to_json(Json& j, const CollinearityFlag& v);
void from_json(const Json& j, CollinearityFlag& v);

// Two-space indent, trailing newline.
std::string dump_json(const Json& j);
void write_json(const std::filesystem::path& path, const Json& j);
Json read_json(const std::filesystem::path& path);

template <typename T>
T load_json(const std::filesystem::path& path) {
  return read_json(path).get<T>();
}

void write_correlation_csv(std::ostream& out, const CorrelationMatrix& m);

}  // namespace ppmx
