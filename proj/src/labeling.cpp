#include "ppmx/labeling.hpp"

#include <algorithm>
#include <vector>

#include "ppmx/error.hpp"

namespace ppmx {

const char* to_string(Comparison op) {
  switch (op) {
    case Comparison::kGreater: return ">";
    case Comparison::kGreaterEqual: return ">=";
    case Comparison::kLess: return "<";
    case Comparison::kLessEqual: return "<=";
    case Comparison::kEqual: return "==";
    case Comparison::kNotEqual: return "!=";
  }
  return "?";
}

Comparison parse_comparison(const std::string& text) {
  for (Comparison op : {Comparison::kGreater, Comparison::kGreaterEqual, Comparison::kLess,
                        Comparison::kLessEqual, Comparison::kEqual, Comparison::kNotEqual}) {
    if (text == to_string(op)) return op;
  }
  throw_config("BadComparison", "unknown comparison '" + text + "'");
}

const char* to_string(LabelRule::Kind kind) {
  switch (kind) {
    case LabelRule::Kind::kActivityOccurs: return "activity_occurs";
    case LabelRule::Kind::kStaticThreshold: return "static_attr_threshold";
    case LabelRule::Kind::kDynamicThreshold: return "dynamic_attr_threshold";
    case LabelRule::Kind::kDurationThreshold: return "duration_threshold";
  }
  return "?";
}

LabelRule::Kind parse_label_kind(const std::string& text) {
  for (auto k : {LabelRule::Kind::kActivityOccurs, LabelRule::Kind::kStaticThreshold,
                 LabelRule::Kind::kDynamicThreshold, LabelRule::Kind::kDurationThreshold}) {
    if (text == to_string(k)) return k;
  }
  throw_config("BadLabelRule", "unknown label rule kind '" + text + "'");
}

double trace_duration_minutes(const Trace& trace) {
  return static_cast<double>(trace.end() - trace.start()) / 60000.0;
}

namespace {

bool compare(double lhs, Comparison op, double rhs) {
  switch (op) {
    case Comparison::kGreater: return lhs > rhs;
    case Comparison::kGreaterEqual: return lhs >= rhs;
    case Comparison::kLess: return lhs < rhs;
    case Comparison::kLessEqual: return lhs <= rhs;
    case Comparison::kEqual: return lhs == rhs;
    case Comparison::kNotEqual: return lhs != rhs;
  }
  return false;
}

bool matches(const Value& v, const LabelRule& rule) {
  if (auto d = as_number(v)) return compare(*d, rule.op, *rule.threshold);
  if (const std::string* s = as_category(v)) {
    return rule.op == Comparison::kEqual ? *s == *rule.level : *s != *rule.level;
  }
  return false;
}

void check_attribute(const LabelRule& rule, const Schema& schema, Scope scope) {
  const AttributeSpec* spec = schema.find(rule.attribute);
  if (!spec) throw_config("UnknownAttribute", "label rule references unknown attribute '" + rule.attribute + "'");
  if (spec->scope != scope)
    throw_config("UnknownAttribute", "attribute '" + rule.attribute + "' has the wrong scope for " +
                                         to_string(rule.kind));
  if (spec->dtype == DType::kNumeric) {
    if (!rule.threshold) throw_config("BadLabelRule", "numeric attribute rule needs a threshold");
  } else {
    if (!rule.level || (rule.op != Comparison::kEqual && rule.op != Comparison::kNotEqual))
      throw_config("BadLabelRule", "categorical attribute rule needs a level and == or !=");
  }
}

}  // namespace

LabelRule resolve_rule(const LabelRule& rule, const EventLog& log) {
  LabelRule out = rule;
  switch (rule.kind) {
    case LabelRule::Kind::kActivityOccurs:
      if (rule.activity.empty()) throw_config("BadLabelRule", "activity_occurs needs an activity");
      break;
    case LabelRule::Kind::kStaticThreshold:
      check_attribute(rule, log.schema(), Scope::kStatic);
      break;
    case LabelRule::Kind::kDynamicThreshold:
      check_attribute(rule, log.schema(), Scope::kDynamic);
      break;
    case LabelRule::Kind::kDurationThreshold:
      if (rule.op == Comparison::kEqual || rule.op == Comparison::kNotEqual)
        throw_config("BadLabelRule", "duration rules need an ordering comparison");
      if (rule.threshold_is_median) {
        if (log.empty()) throw_data("EmptyLog", "cannot take the median duration of an empty log");
        std::vector<double> d;
        for (const auto& t : log.traces()) d.push_back(trace_duration_minutes(t));
        std::sort(d.begin(), d.end());
        const std::size_t n = d.size();
        out.threshold = n % 2 ? d[n / 2] : 0.5 * (d[n / 2 - 1] + d[n / 2]);
        out.threshold_is_median = false;
      } else if (!rule.threshold) {
        throw_config("BadLabelRule", "duration rule needs a threshold or median");
      }
      break;
  }
  return out;
}

bool evaluate_rule(const LabelRule& rule, const Trace& trace) {
  bool hit = false;
  switch (rule.kind) {
    case LabelRule::Kind::kActivityOccurs:
      hit = std::any_of(trace.events.begin(), trace.events.end(),
                        [&](const Event& e) { return e.activity == rule.activity; });
      break;
    case LabelRule::Kind::kStaticThreshold: {
      auto it = trace.static_payload.find(rule.attribute);
      hit = it != trace.static_payload.end() && matches(it->second, rule);
      break;
    }
    case LabelRule::Kind::kDynamicThreshold:
      hit = std::any_of(trace.events.begin(), trace.events.end(), [&](const Event& e) {
        auto it = e.payload.find(rule.attribute);
        return it != e.payload.end() && matches(it->second, rule);
      });
      break;
    case LabelRule::Kind::kDurationThreshold:
      hit = compare(trace_duration_minutes(trace), rule.op, *rule.threshold);
      break;
  }
  return hit != rule.negate;
}

EventLog apply_labeling(const EventLog& log, const LabelRule& rule) {
  const LabelRule resolved = resolve_rule(rule, log);
  std::vector<Trace> traces = log.traces();
  for (auto& t : traces) t.label = evaluate_rule(resolved, t);
  return EventLog(log.schema(), std::move(traces));
}

}  // namespace ppmx
