#pragma once

#include <optional>
#include <string>

#include "ppmx/event_log.hpp"

namespace ppmx {

enum class Comparison { kGreater, kGreaterEqual, kLess, kLessEqual, kEqual, kNotEqual };

const char* to_string(Comparison op);
Comparison parse_comparison(const std::string& text);

// A closed set of parametric outcome predicates. Every trace maps to exactly
// one class: nulls and absent values fall to the negative side before
// `negate` is applied.
struct LabelRule {
  enum class Kind { kActivityOccurs, kStaticThreshold, kDynamicThreshold, kDurationThreshold };

  Kind kind = Kind::kActivityOccurs;
  std::string activity;                   // kActivityOccurs
  std::string attribute;                  // k*Threshold on attributes
  Comparison op = Comparison::kGreater;
  std::optional<double> threshold;        // numeric comparisons; minutes for durations
  std::optional<std::string> level;       // categorical ==, != comparisons
  bool threshold_is_median = false;       // kDurationThreshold: use the log's median duration
  bool negate = false;

  bool operator==(const LabelRule&) const = default;
};

const char* to_string(LabelRule::Kind kind);
LabelRule::Kind parse_label_kind(const std::string& text);

// Checks the rule against the schema and replaces a median threshold with the
// concrete value computed on `log`.
LabelRule resolve_rule(const LabelRule& rule, const EventLog& log);

bool evaluate_rule(const LabelRule& resolved, const Trace& trace);

EventLog apply_labeling(const EventLog& log, const LabelRule& rule);

double trace_duration_minutes(const Trace& trace);

}  // namespace ppmx
