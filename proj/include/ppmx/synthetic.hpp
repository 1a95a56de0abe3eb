#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "ppmx/csv_io.hpp"
#include "ppmx/event_log.hpp"
#include "ppmx/labeling.hpp"

namespace ppmx {

// Hospital-style log shaped like a small sepsis log: 14 activities, lengths
// 5..185 (mean about 14), mixed static and dynamic attributes with sparse lab
// values. Cases that are readmitted end with "Return ER".
struct SyntheticLogConfig {
  std::size_t n_traces = 776;
  std::size_t min_length = 5;
  std::size_t max_length = 185;
  double mean_extra_length = 9.0;  // mean of (length - min_length) before clipping
  double positive_intercept = -2.3;
  bool whole_hours = false;        // every timestamp on the hour
  std::uint64_t seed = 42;
};

inline constexpr const char* kReturnActivity = "Return ER";

EventLog synthetic_sepsis_log(const SyntheticLogConfig& config = {});

// Label rule matching the generator: positive iff the case returns.
LabelRule synthetic_label_rule();

// Writes `<dir>/<stem>.csv` and `<dir>/<stem>.mapping.json`; returns the mapping.
ColumnMapping write_synthetic_log(const std::string& dir, const std::string& stem, const SyntheticLogConfig& config = {});

}  // namespace ppmx
