#include "ppmx/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>

#include "ppmx/rng.hpp"
#include "ppmx/serialization.hpp"

namespace ppmx {

namespace {

constexpr std::array<const char*, 10> kMiddle = {
    "Leucocytes", "CRP", "LacticAcid", "IV Liquid", "IV Antibiotics",
    "Admission NC", "Admission IC", "ER Sepsis Triage", "Leucocytes", "CRP"};
constexpr std::array<const char*, 3> kRelease = {"Release A", "Release B", "Release C"};
constexpr std::array<const char*, 6> kDiagnoses = {"A", "B", "C", "D", "E", "F"};
constexpr std::array<const char*, 5> kOrgGroups = {"A", "B", "C", "E", "W"};

constexpr TimestampMs kEpoch2014 = 1388534400000;  // 2014-01-01T00:00:00Z
constexpr TimestampMs kMinute = 60'000;
constexpr TimestampMs kHour = 60 * kMinute;

double round1(double v) { return std::round(v * 10.0) / 10.0; }

}  // namespace

LabelRule synthetic_label_rule() {
  LabelRule r;
  r.kind = LabelRule::Kind::kActivityOccurs;
  r.activity = kReturnActivity;
  return r;
}

EventLog synthetic_sepsis_log(const SyntheticLogConfig& config) {
  Schema schema;
  schema.attributes = {
      {"Age", Scope::kStatic, DType::kNumeric},
      {"Gender", Scope::kStatic, DType::kCategorical},
      {"Diagnose", Scope::kStatic, DType::kCategorical},
      {"org_group", Scope::kDynamic, DType::kCategorical},
      {"CRP", Scope::kDynamic, DType::kNumeric},
      {"Leucocytes", Scope::kDynamic, DType::kNumeric},
      {"LacticAcid", Scope::kDynamic, DType::kNumeric},
  };

  Rng rng = make_rng(config.seed, 0x73796e7468);
  std::vector<Trace> traces;
  traces.reserve(config.n_traces);
  for (std::size_t t = 0; t < config.n_traces; ++t) {
    Trace tr;
    tr.case_id = "case_" + std::to_string(100000 + t);
    const double age = std::clamp(std::round(normal(rng, 65.0, 15.0) / 5.0) * 5.0, 20.0, 90.0);
    const std::string gender = bernoulli(rng, 0.5) ? "M" : "F";
    const std::string diagnose = kDiagnoses[uniform_index(rng, kDiagnoses.size())];
    tr.static_payload = {{"Age", age}, {"Gender", gender}, {"Diagnose", diagnose}};

    const double severity = normal(rng);
    const double logit = config.positive_intercept + 0.04 * (age - 65.0) + 0.9 * (diagnose == "A") + 0.8 * severity;
    const bool returns = bernoulli(rng, 1.0 / (1.0 + std::exp(-logit)));

    std::size_t length;
    if (t == 0) {
      length = config.max_length;
    } else {
      const double extra = -config.mean_extra_length * std::log(1.0 - uniform01(rng));
      length = std::min(config.max_length, config.min_length + static_cast<std::size_t>(extra));
    }
    const std::size_t tail = returns ? 2 : 1;  // release (+ return)
    const std::size_t head = 2;                 // registration, triage
    const std::size_t middle = length - std::min(length, head + tail);

    std::vector<std::string> acts = {"ER Registration", "ER Triage"};
    for (std::size_t i = 0; i < middle; ++i) {
      // Sicker patients get more lab work.
      const bool lab_bias = severity > 0.5 && bernoulli(rng, 0.3);
      acts.emplace_back(lab_bias ? "CRP" : kMiddle[uniform_index(rng, kMiddle.size())]);
    }
    acts.emplace_back(kRelease[uniform_index(rng, kRelease.size())]);
    if (returns) acts.emplace_back(kReturnActivity);
    acts.resize(std::min(acts.size(), length));
    if (returns) acts.back() = kReturnActivity;

    TimestampMs ts = kEpoch2014 + static_cast<TimestampMs>(uniform_index(rng, 365 * 24)) * kHour;
    if (!config.whole_hours) ts += static_cast<TimestampMs>(uniform_index(rng, 60)) * kMinute;
    for (std::size_t i = 0; i < acts.size(); ++i) {
      Event e;
      e.activity = acts[i];
      if (i > 0) {
        const double gap_min = -45.0 * std::log(1.0 - uniform01(rng)) + (acts[i] == kReturnActivity ? 20 * 24 * 60 : 0);
        if (config.whole_hours) ts += static_cast<TimestampMs>(1 + std::floor(gap_min / 60.0)) * kHour;
        else ts += static_cast<TimestampMs>(1 + std::floor(gap_min)) * kMinute;
      }
      e.timestamp = ts;
      e.payload["org_group"] = std::string(kOrgGroups[uniform_index(rng, kOrgGroups.size())]);
      e.payload["CRP"] = std::monostate{};
      e.payload["Leucocytes"] = std::monostate{};
      e.payload["LacticAcid"] = std::monostate{};
      if (e.activity == "CRP") e.payload["CRP"] = round1(std::max(0.0, normal(rng, 80.0 + 40.0 * severity, 30.0)));
      if (e.activity == "Leucocytes") e.payload["Leucocytes"] = round1(std::max(0.1, normal(rng, 11.0 + 2.0 * severity, 4.0)));
      if (e.activity == "LacticAcid") e.payload["LacticAcid"] = round1(std::max(0.1, normal(rng, 2.0 + 0.6 * severity, 0.8)));
      tr.events.push_back(std::move(e));
    }
    traces.push_back(std::move(tr));
  }
  return EventLog(std::move(schema), std::move(traces));
}

ColumnMapping write_synthetic_log(const std::string& dir, const std::string& stem, const SyntheticLogConfig& config) {
  std::filesystem::create_directories(dir);
  const EventLog log = synthetic_sepsis_log(config);
  const ColumnMapping mapping = export_mapping(log);
  const std::filesystem::path base = std::filesystem::path(dir) / stem;
  export_csv(base.string() + ".csv", log, mapping);
  write_json(base.string() + ".mapping.json", Json(mapping));
  return mapping;
}

}  // namespace ppmx
