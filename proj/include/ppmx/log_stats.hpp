#pragma once

#include <cstddef>

#include "ppmx/event_log.hpp"

namespace ppmx {

// Summary statistics of a labeled event log. Column counts exclude the case
// id and timestamp; the activity counts as a dynamic categorical column.
struct LogStats {
  std::size_t n_traces = 0;
  std::size_t shortest_trace = 0;
  double avg_trace_length = 0.0;
  std::size_t longest_trace = 0;
  std::size_t n_trace_variants = 0;
  double positive_ratio = 0.0;
  std::size_t n_event_classes = 0;
  std::size_t n_static_cols = 0;
  std::size_t n_dynamic_cols = 0;
  std::size_t n_categorical_cols = 0;
  std::size_t n_numeric_cols = 0;
  std::size_t n_static_levels = 0;
  std::size_t n_dynamic_levels = 0;
};

LogStats compute_log_stats(const EventLog& log);

}  // namespace ppmx
