#include "ppmx/event_log.hpp"

#include <algorithm>
#include <set>

#include "ppmx/error.hpp"

namespace ppmx {

const char* to_string(Scope scope) { return scope == Scope::kStatic ? "static" : "dynamic"; }
const char* to_string(DType dtype) { return dtype == DType::kNumeric ? "numeric" : "categorical"; }

Scope parse_scope(const std::string& text) {
  if (text == "static") return Scope::kStatic;
  if (text == "dynamic") return Scope::kDynamic;
  throw_config("BadScope", "unknown attribute scope '" + text + "'");
}

DType parse_dtype(const std::string& text) {
  if (text == "categorical") return DType::kCategorical;
  if (text == "numeric") return DType::kNumeric;
  throw_config("BadDType", "unknown attribute dtype '" + text + "'");
}

const AttributeSpec* Schema::find(const std::string& name) const {
  for (const auto& a : attributes)
    if (a.name == name) return &a;
  return nullptr;
}

std::vector<AttributeSpec> Schema::select(Scope scope, DType dtype) const {
  std::vector<AttributeSpec> out;
  for (const auto& a : attributes)
    if (a.scope == scope && a.dtype == dtype) out.push_back(a);
  return out;
}

void Schema::validate() const {
  std::set<std::string> seen{case_id};
  for (const std::string* n : {&activity, &timestamp}) {
    if (!seen.insert(*n).second) throw_config("DuplicateAttribute", "mandatory column '" + *n + "' repeated");
  }
  for (const auto& a : attributes) {
    if (a.name.empty()) throw_config("DuplicateAttribute", "empty attribute name");
    if (!seen.insert(a.name).second) throw_config("DuplicateAttribute", "attribute '" + a.name + "' declared twice");
  }
}

std::optional<double> as_number(const Value& v) {
  if (const double* d = std::get_if<double>(&v)) return *d;
  return std::nullopt;
}

const std::string* as_category(const Value& v) { return std::get_if<std::string>(&v); }

EventLog::EventLog(Schema schema, std::vector<Trace> traces)
    : schema_(std::move(schema)), traces_(std::move(traces)) {
  schema_.validate();
  std::sort(traces_.begin(), traces_.end(),
            [](const Trace& a, const Trace& b) { return a.case_id < b.case_id; });
  for (std::size_t i = 1; i < traces_.size(); ++i) {
    if (traces_[i].case_id == traces_[i - 1].case_id)
      throw_data("DuplicateCase", "case id '" + traces_[i].case_id + "' appears twice");
  }
  for (auto& t : traces_) {
    if (t.events.empty()) throw_data("EmptyTrace", "trace '" + t.case_id + "' has no events");
    std::stable_sort(t.events.begin(), t.events.end(),
                     [](const Event& a, const Event& b) { return a.timestamp < b.timestamp; });
    for (const auto& [name, value] : t.static_payload) {
      const AttributeSpec* spec = schema_.find(name);
      if (!spec || spec->scope != Scope::kStatic)
        throw_data("UnknownAttribute", "static payload key '" + name + "' not a static attribute");
    }
    for (const auto& e : t.events) {
      for (const auto& [name, value] : e.payload) {
        const AttributeSpec* spec = schema_.find(name);
        if (!spec || spec->scope != Scope::kDynamic)
          throw_data("UnknownAttribute", "event payload key '" + name + "' not a dynamic attribute");
      }
    }
  }
}

bool EventLog::is_labeled() const {
  return std::all_of(traces_.begin(), traces_.end(), [](const Trace& t) { return t.label.has_value(); });
}

const Trace* EventLog::find(const std::string& case_id) const {
  auto it = std::lower_bound(traces_.begin(), traces_.end(), case_id,
                             [](const Trace& t, const std::string& id) { return t.case_id < id; });
  if (it == traces_.end() || it->case_id != case_id) return nullptr;
  return &*it;
}

EventLog drop_short_traces(const EventLog& log, std::size_t min_length) {
  std::vector<Trace> kept;
  for (const auto& t : log.traces())
    if (t.size() >= min_length) kept.push_back(t);
  return EventLog(log.schema(), std::move(kept));
}

}  // namespace ppmx
