#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ppmx/event_log.hpp"

namespace ppmx {

inline constexpr const char* kDefaultTimestampFormat = "%Y-%m-%dT%H:%M:%S";

// Declarative description of an event-log CSV. Every header column must be a
// mandatory column, the label column, a declared attribute or ignored.
struct ColumnMapping {
  std::string case_id = "case_id";
  std::string activity = "activity";
  std::string timestamp = "timestamp";
  // strptime format; fractional seconds (".fff") and a trailing "Z" are
  // accepted after it.
  std::string timestamp_format = kDefaultTimestampFormat;
  std::optional<std::string> label;
  std::vector<AttributeSpec> attributes;
  std::vector<std::string> ignore;

  Schema schema() const;
  bool operator==(const ColumnMapping&) const = default;
};

TimestampMs parse_timestamp(const std::string& text, const std::string& format);
std::string format_timestamp(TimestampMs ts, const std::string& format);

EventLog read_event_log(std::istream& in, const ColumnMapping& mapping);
EventLog ingest_csv(const std::string& path, const ColumnMapping& mapping);

// Mapping describing the CSV that write_event_log produces for `log`.
ColumnMapping export_mapping(const EventLog& log,
                             const std::string& timestamp_format = kDefaultTimestampFormat);

// One row per event; static values repeated on every row of a case.
void write_event_log(std::ostream& out, const EventLog& log, const ColumnMapping& mapping);
void export_csv(const std::string& path, const EventLog& log, const ColumnMapping& mapping);

}  // namespace ppmx
