#include "ppmx/log_stats.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "ppmx/error.hpp"

namespace ppmx {

LogStats compute_log_stats(const EventLog& log) {
  if (log.empty()) throw_data("EmptyLog", "log has no traces");
  if (!log.is_labeled()) throw_data("UnlabeledLog", "log statistics need a labeled log");

  LogStats s;
  s.n_traces = log.size();
  s.shortest_trace = log.traces().front().size();
  std::size_t total_events = 0;
  std::size_t positives = 0;
  std::set<std::vector<std::string>> variants;
  std::set<std::string> activities;
  std::map<std::string, std::set<std::string>> levels;

  for (const auto& t : log.traces()) {
    s.shortest_trace = std::min(s.shortest_trace, t.size());
    s.longest_trace = std::max(s.longest_trace, t.size());
    total_events += t.size();
    if (*t.label) ++positives;
    std::vector<std::string> seq;
    for (const auto& e : t.events) {
      seq.push_back(e.activity);
      activities.insert(e.activity);
      for (const auto& [name, v] : e.payload)
        if (const std::string* c = as_category(v)) levels[name].insert(*c);
    }
    for (const auto& [name, v] : t.static_payload)
      if (const std::string* c = as_category(v)) levels[name].insert(*c);
    variants.insert(std::move(seq));
  }

  s.avg_trace_length = static_cast<double>(total_events) / static_cast<double>(s.n_traces);
  s.n_trace_variants = variants.size();
  s.positive_ratio = static_cast<double>(positives) / static_cast<double>(s.n_traces);
  s.n_event_classes = activities.size();

  s.n_dynamic_cols = 1;
  s.n_categorical_cols = 1;
  s.n_dynamic_levels = activities.size();
  for (const auto& a : log.schema().attributes) {
    (a.scope == Scope::kStatic ? s.n_static_cols : s.n_dynamic_cols) += 1;
    (a.dtype == DType::kCategorical ? s.n_categorical_cols : s.n_numeric_cols) += 1;
    if (a.dtype == DType::kCategorical) {
      auto it = levels.find(a.name);
      const std::size_t n = it == levels.end() ? 0 : it->second.size();
      (a.scope == Scope::kStatic ? s.n_static_levels : s.n_dynamic_levels) += n;
    }
  }
  return s;
}

}  // namespace ppmx
