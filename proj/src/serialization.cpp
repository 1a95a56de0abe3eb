#include "ppmx/serialization.hpp"

#include <fstream>
#include <sstream>

#include "ppmx/error.hpp"
#include "ppmx/text.hpp"

namespace ppmx {

namespace {

// Copies j[key] into out when present; missing keys keep the default.
template <typename T>
void read_opt(const Json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end()) out = it->template get<T>();
}

template <typename T>
void read_req(const Json& j, const char* key, T& out) {
  auto it = j.find(key);
  if (it == j.end()) throw_data("MissingKey", std::string("JSON object lacks \"") + key + "\"");
  out = it->template get<T>();
}

}  // namespace

void to_json(Json& j, const AttributeSpec& v) {
  j = {{"name", v.name}, {"scope", to_string(v.scope)}, {"dtype", to_string(v.dtype)}};
}
void from_json(const Json& j, AttributeSpec& v) {
  read_req(j, "name", v.name);
  v.scope = parse_scope(j.at("scope").get<std::string>());
  v.dtype = parse_dtype(j.at("dtype").get<std::string>());
}

void to_json(Json& j, const Schema& v) {
  j = {{"case_id", v.case_id}, {"activity", v.activity}, {"timestamp", v.timestamp}, {"attributes", v.attributes}};
}
void from_json(const Json& j, Schema& v) {
  read_opt(j, "case_id", v.case_id);
  read_opt(j, "activity", v.activity);
  read_opt(j, "timestamp", v.timestamp);
  read_opt(j, "attributes", v.attributes);
}

void to_json(Json& j, const ColumnMapping& v) {
  j = {{"case_id", v.case_id},   {"activity", v.activity},     {"timestamp", v.timestamp},
       {"timestamp_format", v.timestamp_format}, {"label", v.label}, {"attributes", v.attributes},
       {"ignore", v.ignore}};
}
void from_json(const Json& j, ColumnMapping& v) {
  v = ColumnMapping{};
  read_opt(j, "case_id", v.case_id);
  read_opt(j, "activity", v.activity);
  read_opt(j, "timestamp", v.timestamp);
  read_opt(j, "timestamp_format", v.timestamp_format);
  read_opt(j, "label", v.label);
  read_opt(j, "attributes", v.attributes);
  read_opt(j, "ignore", v.ignore);
}

void to_json(Json& j, const LabelRule& v) {
  j = {{"kind", to_string(v.kind)},
       {"activity", v.activity},
       {"attribute", v.attribute},
       {"op", to_string(v.op)},
       {"threshold", v.threshold},
       {"level", v.level},
       {"threshold_is_median", v.threshold_is_median},
       {"negate", v.negate}};
}
void from_json(const Json& j, LabelRule& v) {
  v = LabelRule{};
  v.kind = parse_label_kind(j.at("kind").get<std::string>());
  read_opt(j, "activity", v.activity);
  read_opt(j, "attribute", v.attribute);
  if (auto it = j.find("op"); it != j.end()) v.op = parse_comparison(it->get<std::string>());
  read_opt(j, "threshold", v.threshold);
  read_opt(j, "level", v.level);
  read_opt(j, "threshold_is_median", v.threshold_is_median);
  read_opt(j, "negate", v.negate);
}

void to_json(Json& j, const BucketKey& v) {
  j = {{"strategy", to_string(v.strategy)}, {"length", v.length}, {"name", v.name()}};
}
void from_json(const Json& j, BucketKey& v) {
  v.strategy = parse_bucket_strategy(j.at("strategy").get<std::string>());
  read_opt(j, "length", v.length);
}

void to_json(Json& j, const BucketSummary& v) {
  j = {{"key", v.key},
       {"size", v.size},
       {"n_positive", v.n_positive},
       {"positive_ratio", v.positive_ratio},
       {"trainable", v.trainable},
       {"skip_reason", v.skip_reason}};
}
void from_json(const Json& j, BucketSummary& v) {
  read_req(j, "key", v.key);
  read_req(j, "size", v.size);
  read_req(j, "n_positive", v.n_positive);
  read_req(j, "positive_ratio", v.positive_ratio);
  read_req(j, "trainable", v.trainable);
  read_opt(j, "skip_reason", v.skip_reason);
}

void to_json(Json& j, const FeatureDescriptor& v) {
  j = {{"column_name", v.column_name},
       {"source_attribute", v.source_attribute},
       {"transform", to_string(v.transform)},
       {"level", v.level},
       {"agg", v.agg ? Json(to_string(*v.agg)) : Json(nullptr)},
       {"position", v.position}};
}
void from_json(const Json& j, FeatureDescriptor& v) {
  read_req(j, "column_name", v.column_name);
  read_req(j, "source_attribute", v.source_attribute);
  v.transform = parse_transform(j.at("transform").get<std::string>());
  read_opt(j, "level", v.level);
  v.agg.reset();
  if (auto it = j.find("agg"); it != j.end() && !it->is_null()) v.agg = parse_agg_fn(it->get<std::string>());
  read_opt(j, "position", v.position);
}

void to_json(Json& j, const RowId& v) { j = {{"case_id", v.case_id}, {"prefix_length", v.prefix_length}}; }
void from_json(const Json& j, RowId& v) {
  read_req(j, "case_id", v.case_id);
  read_req(j, "prefix_length", v.prefix_length);
}

void to_json(Json& j, const EncoderSpec& v) {
  j = {{"kind", to_string(v.kind)},
       {"schema", v.schema},
       {"vocabulary", v.vocabulary},
       {"index_length", v.index_length},
       {"columns", v.columns}};
}
void from_json(const Json& j, EncoderSpec& v) {
  v.kind = parse_encoding_kind(j.at("kind").get<std::string>());
  read_req(j, "schema", v.schema);
  read_req(j, "vocabulary", v.vocabulary);
  read_opt(j, "index_length", v.index_length);
  read_req(j, "columns", v.columns);
}

void to_json(Json& j, const LogRegConfig& v) {
  j = {{"l2", v.l2}, {"tolerance", v.tolerance}, {"max_iterations", v.max_iterations}};
}
void from_json(const Json& j, LogRegConfig& v) {
  read_opt(j, "l2", v.l2);
  read_opt(j, "tolerance", v.tolerance);
  read_opt(j, "max_iterations", v.max_iterations);
}

void to_json(Json& j, const LinearModel& v) {
  j = {{"kind", "logreg"},
       {"column_names", v.column_names},
       {"weights", v.weights},
       {"intercept", v.intercept},
       {"scale_min", v.scale_min},
       {"scale_range", v.scale_range},
       {"iterations", v.iterations},
       {"final_loss", v.final_loss},
       {"converged", v.converged}};
}
void from_json(const Json& j, LinearModel& v) {
  read_req(j, "column_names", v.column_names);
  read_req(j, "weights", v.weights);
  read_req(j, "intercept", v.intercept);
  read_req(j, "scale_min", v.scale_min);
  read_req(j, "scale_range", v.scale_range);
  read_opt(j, "iterations", v.iterations);
  read_opt(j, "final_loss", v.final_loss);
  read_opt(j, "converged", v.converged);
}

void to_json(Json& j, const GbtConfig& v) {
  j = {{"n_trees", v.n_trees},
       {"max_depth", v.max_depth},
       {"learning_rate", v.learning_rate},
       {"l2", v.l2},
       {"min_split_gain", v.min_split_gain},
       {"min_child_cover", v.min_child_cover},
       {"subsample", v.subsample},
       {"colsample", v.colsample}};
}
void from_json(const Json& j, GbtConfig& v) {
  read_opt(j, "n_trees", v.n_trees);
  read_opt(j, "max_depth", v.max_depth);
  read_opt(j, "learning_rate", v.learning_rate);
  read_opt(j, "l2", v.l2);
  read_opt(j, "min_split_gain", v.min_split_gain);
  read_opt(j, "min_child_cover", v.min_child_cover);
  read_opt(j, "subsample", v.subsample);
  read_opt(j, "colsample", v.colsample);
  read_opt(j, "seed", v.seed);
}

void to_json(Json& j, const TreeNode& v) {
  if (v.is_leaf()) {
    j = {{"leaf", v.leaf_value}, {"cover", v.cover}};
  } else {
    j = {{"feature", v.feature}, {"threshold", v.threshold}, {"left", v.left},
         {"right", v.right},     {"gain", v.gain},           {"cover", v.cover}};
  }
}
void from_json(const Json& j, TreeNode& v) {
  v = TreeNode{};
  read_req(j, "cover", v.cover);
  if (auto it = j.find("leaf"); it != j.end()) {
    v.leaf_value = it->get<double>();
    return;
  }
  read_req(j, "feature", v.feature);
  read_req(j, "threshold", v.threshold);
  read_req(j, "left", v.left);
  read_req(j, "right", v.right);
  read_req(j, "gain", v.gain);
}

void to_json(Json& j, const RegressionTree& v) { j = v.nodes; }
void from_json(const Json& j, RegressionTree& v) { v.nodes = j.get<std::vector<TreeNode>>(); }

void to_json(Json& j, const TreeEnsemble& v) {
  j = {{"kind", "gbt"},
       {"column_names", v.column_names},
       {"base_score", v.base_score},
       {"learning_rate", v.learning_rate},
       {"train_loss", v.train_loss},
       {"trees", v.trees}};
}
void from_json(const Json& j, TreeEnsemble& v) {
  read_req(j, "column_names", v.column_names);
  read_req(j, "base_score", v.base_score);
  read_req(j, "learning_rate", v.learning_rate);
  read_opt(j, "train_loss", v.train_loss);
  read_req(j, "trees", v.trees);
}

void to_json(Json& j, const EvalReport& v) {
  j = {{"n_rows", v.n_rows}, {"n_positive", v.n_positive}, {"auc", v.auc}, {"accuracy", v.accuracy},
       {"log_loss", v.log_loss}};
}
void from_json(const Json& j, EvalReport& v) {
  read_req(j, "n_rows", v.n_rows);
  read_req(j, "n_positive", v.n_positive);
  read_opt(j, "auc", v.auc);
  read_req(j, "accuracy", v.accuracy);
  read_req(j, "log_loss", v.log_loss);
}

void to_json(Json& j, const ImportanceVector& v) {
  j = {{"criterion", v.criterion}, {"columns", v.columns}, {"scores", v.scores}, {"ranking", v.ranking}};
  if (!v.signs.empty()) j["signs"] = v.signs;
}
void from_json(const Json& j, ImportanceVector& v) {
  std::string criterion;
  std::vector<std::string> columns;
  std::vector<double> scores;
  std::vector<int> signs;
  read_req(j, "criterion", criterion);
  read_req(j, "columns", columns);
  read_req(j, "scores", scores);
  read_opt(j, "signs", signs);
  v = make_importance(std::move(criterion), std::move(columns), std::move(scores), std::move(signs));
}

void to_json(Json& j, const PfiReport& v) {
  j = {{"columns", v.columns},   {"mean", v.mean},     {"stddev", v.stddev}, {"baseline_auc", v.baseline_auc},
       {"n_iter", v.n_iter},     {"seed", v.seed}};
}
void from_json(const Json& j, PfiReport& v) {
  read_req(j, "columns", v.columns);
  read_req(j, "mean", v.mean);
  read_req(j, "stddev", v.stddev);
  read_req(j, "baseline_auc", v.baseline_auc);
  read_req(j, "n_iter", v.n_iter);
  read_req(j, "seed", v.seed);
}

void to_json(Json& j, const Attribution& v) { j = {{"phi", v.phi}, {"base", v.base}, {"output", v.output}}; }
void from_json(const Json& j, Attribution& v) {
  read_req(j, "phi", v.phi);
  read_req(j, "base", v.base);
  read_req(j, "output", v.output);
}

void to_json(Json& j, const AttributionSet& v) {
  j = {{"method", v.method},
       {"background_source", v.background_source},
       {"explained_split", v.explained_split},
       {"background_size", v.background_size},
       {"seed", v.seed},
       {"columns", v.columns},
       {"rows", v.rows},
       {"feature_values", v.feature_values},
       {"attributions", v.attributions}};
}
void from_json(const Json& j, AttributionSet& v) {
  read_req(j, "method", v.method);
  read_req(j, "background_source", v.background_source);
  read_req(j, "explained_split", v.explained_split);
  read_req(j, "background_size", v.background_size);
  read_req(j, "seed", v.seed);
  read_req(j, "columns", v.columns);
  read_req(j, "rows", v.rows);
  read_req(j, "feature_values", v.feature_values);
  read_req(j, "attributions", v.attributions);
}

void to_json(Json& j, const GlobalShapReport& v) {
  j = {{"importance", v.importance}, {"n_instances", v.n_instances}};
}
void from_json(const Json& j, GlobalShapReport& v) {
  read_req(j, "importance", v.importance);
  read_req(j, "n_instances", v.n_instances);
}

void to_json(Json& j, const NumericSummary& v) {
  j = {{"min", v.min},           {"max", v.max},   {"mean", v.mean}, {"std", v.std}, {"quantiles", v.quantiles},
       {"histogram", v.histogram}};
}
void from_json(const Json& j, NumericSummary& v) {
  read_req(j, "min", v.min);
  read_req(j, "max", v.max);
  read_req(j, "mean", v.mean);
  read_req(j, "std", v.std);
  read_req(j, "quantiles", v.quantiles);
  read_req(j, "histogram", v.histogram);
}

void to_json(Json& j, const ColumnProfile& v) {
  Json top = Json::array();
  for (const auto& [value, count] : v.top_values) top.push_back({{"value", value}, {"count", count}});
  j = {{"name", v.name},
       {"kind", to_string(v.kind)},
       {"n", v.n},
       {"missing_fraction", v.missing_fraction},
       {"zero_fraction", v.zero_fraction},
       {"distinct_count", v.distinct_count},
       {"constant", v.constant},
       {"numeric", v.numeric},
       {"top_values", top}};
}
void from_json(const Json& j, ColumnProfile& v) {
  read_req(j, "name", v.name);
  v.kind = parse_dtype(j.at("kind").get<std::string>());
  read_req(j, "n", v.n);
  read_req(j, "missing_fraction", v.missing_fraction);
  read_req(j, "zero_fraction", v.zero_fraction);
  read_req(j, "distinct_count", v.distinct_count);
  read_req(j, "constant", v.constant);
  read_opt(j, "numeric", v.numeric);
  v.top_values.clear();
  for (const auto& t : j.at("top_values"))
    v.top_values.emplace_back(t.at("value").get<std::string>(), t.at("count").get<std::size_t>());
}

void to_json(Json& j, const ProfileReport& v) {
  j = {{"subject", v.subject}, {"n_rows", v.n_rows}, {"columns", v.columns}};
}
void from_json(const Json& j, ProfileReport& v) {
  read_req(j, "subject", v.subject);
  read_req(j, "n_rows", v.n_rows);
  read_req(j, "columns", v.columns);
}

void to_json(Json& j, const CorrelationMatrix& v) {
  j = {{"method", to_string(v.method)}, {"columns", v.columns}, {"values", v.values}, {"constant", v.constant}};
}
void from_json(const Json& j, CorrelationMatrix& v) {
  const auto method = j.at("method").get<std::string>();
  if (method == "pearson") v.method = CorrelationMethod::kPearson;
  else if (method == "cramers_v") v.method = CorrelationMethod::kCramersV;
  else throw_data("BadValue", "unknown correlation method " + method);
  read_req(j, "columns", v.columns);
  read_req(j, "values", v.values);
  read_req(j, "constant", v.constant);
}

void to_json(Json& j, const MutualInfoReport& v) {
  j = {{"bins", v.bins},
       {"top_k", v.top_k},
       {"scores", v.scores},
       {"top_k_names", v.top_k_names()},
       {"extra_columns", v.extra_columns},
       {"extra_scores", v.extra_scores}};
}
void from_json(const Json& j, MutualInfoReport& v) {
  read_req(j, "bins", v.bins);
  read_req(j, "top_k", v.top_k);
  read_req(j, "scores", v.scores);
  read_opt(j, "extra_columns", v.extra_columns);
  read_opt(j, "extra_scores", v.extra_scores);
}

void to_json(Json& j, const RunFingerprint& v) {
  j = {{"settings", Json::parse(v.settings)},
       {"settings_hash", v.settings_hash},
       {"seed", v.seed},
       {"methods", v.methods},
       {"profile_refs", v.profile_refs}};
}
void from_json(const Json& j, RunFingerprint& v) {
  v.settings = j.at("settings").dump();
  read_req(j, "settings_hash", v.settings_hash);
  read_req(j, "seed", v.seed);
  read_req(j, "methods", v.methods);
  read_opt(j, "profile_refs", v.profile_refs);
}

void to_json(Json& j, const PairMetrics& v) {
  j = {{"jaccard", v.jaccard}, {"spearman", v.spearman}, {"mean_abs_diff", v.mean_abs_diff},
       {"n_shared", v.n_shared}};
}
void from_json(const Json& j, PairMetrics& v) {
  read_req(j, "jaccard", v.jaccard);
  read_req(j, "spearman", v.spearman);
  read_opt(j, "mean_abs_diff", v.mean_abs_diff);
  read_req(j, "n_shared", v.n_shared);
}

void to_json(Json& j, const StabilityEntry& v) {
  j = {{"bucket", v.bucket}, {"method", v.method}, {"metrics", v.metrics}};
}
void from_json(const Json& j, StabilityEntry& v) {
  read_req(j, "bucket", v.bucket);
  read_req(j, "method", v.method);
  read_req(j, "metrics", v.metrics);
}

void to_json(Json& j, const StabilityReport& v) {
  j = {{"k", v.k}, {"seed_a", v.seed_a}, {"seed_b", v.seed_b}, {"settings_hash", v.settings_hash},
       {"entries", v.entries}};
}
void from_json(const Json& j, StabilityReport& v) {
  read_req(j, "k", v.k);
  read_req(j, "seed_a", v.seed_a);
  read_req(j, "seed_b", v.seed_b);
  read_opt(j, "settings_hash", v.settings_hash);
  read_req(j, "entries", v.entries);
}

void to_json(Json& j, const AgreementReport& v) {
  j = {{"method", v.method}, {"k", v.k}, {"overlap", v.overlap}, {"shared", v.shared},
       {"rank_correlation", v.rank_correlation}};
}
void from_json(const Json& j, AgreementReport& v) {
  read_req(j, "method", v.method);
  read_req(j, "k", v.k);
  read_req(j, "overlap", v.overlap);
  read_req(j, "shared", v.shared);
  read_opt(j, "rank_correlation", v.rank_correlation);
}

void to_json(Json& j, const CollinearityFlag& v) {
  j = {{"method", v.method}, {"column_a", v.column_a}, {"column_b", v.column_b},
       {"abs_correlation", v.abs_correlation}, {"threshold", v.threshold}};
}
void from_json(const Json& j, CollinearityFlag& v) {
  read_req(j, "method", v.method);
  read_req(j, "column_a", v.column_a);
  read_req(j, "column_b", v.column_b);
  read_req(j, "abs_correlation", v.abs_correlation);
  read_req(j, "threshold", v.threshold);
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

void write_json(const std::filesystem::path& path, const Json& j) { write_file(path.string(), dump_json(j)); }

Json read_json(const std::filesystem::path& path) {
  const std::string text = read_file(path.string());
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw_data("MalformedJson", path.string() + ": " + e.what());
  }
}

void write_correlation_csv(std::ostream& out, const CorrelationMatrix& m) {
  std::vector<std::string> row{""};
  row.insert(row.end(), m.columns.begin(), m.columns.end());
  write_csv_row(out, row);
  for (std::size_t i = 0; i < m.size(); ++i) {
    row.assign(1, m.columns[i]);
    for (std::size_t j = 0; j < m.size(); ++j) row.push_back(format_double(m.at(i, j)));
    write_csv_row(out, row);
  }
}

}  // namespace ppmx
