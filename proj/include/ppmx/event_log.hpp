#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace ppmx {

enum class Scope { kStatic, kDynamic };
enum class DType { kCategorical, kNumeric };

const char* to_string(Scope scope);
const char* to_string(DType dtype);
Scope parse_scope(const std::string& text);
DType parse_dtype(const std::string& text);

struct AttributeSpec {
  std::string name;
  Scope scope = Scope::kDynamic;
  DType dtype = DType::kCategorical;

  bool operator==(const AttributeSpec&) const = default;
};

// Case id, activity and timestamp are designated by name; `attributes` holds
// every other column. The activity is a dynamic categorical attribute but is
// stored on Event directly rather than in the payload.
struct Schema {
  std::string case_id = "case_id";
  std::string activity = "activity";
  std::string timestamp = "timestamp";
  std::vector<AttributeSpec> attributes;

  const AttributeSpec* find(const std::string& name) const;
  std::vector<AttributeSpec> select(Scope scope, DType dtype) const;
  // Throws ConfigError on duplicate or clashing names.
  void validate() const;

  bool operator==(const Schema&) const = default;
};

// Null, numeric or categorical cell.
using Value = std::variant<std::monostate, double, std::string>;

inline bool is_null(const Value& v) { return std::holds_alternative<std::monostate>(v); }
std::optional<double> as_number(const Value& v);
const std::string* as_category(const Value& v);

using AttributeMap = std::map<std::string, Value>;

// Milliseconds since the Unix epoch, UTC.
using TimestampMs = std::int64_t;

struct Event {
  std::string activity;
  TimestampMs timestamp = 0;
  AttributeMap payload;

  bool operator==(const Event&) const = default;
};

struct Trace {
  std::string case_id;
  AttributeMap static_payload;
  std::vector<Event> events;
  std::optional<bool> label;

  std::size_t size() const { return events.size(); }
  TimestampMs start() const { return events.front().timestamp; }
  TimestampMs end() const { return events.back().timestamp; }

  bool operator==(const Trace&) const = default;
};

// Immutable after construction. Traces are kept ordered by case id and each
// trace's events by timestamp (stable, so ties keep input order).
class EventLog {
 public:
  EventLog() = default;
  EventLog(Schema schema, std::vector<Trace> traces);

  const Schema& schema() const { return schema_; }
  const std::vector<Trace>& traces() const { return traces_; }
  std::size_t size() const { return traces_.size(); }
  bool empty() const { return traces_.empty(); }
  bool is_labeled() const;
  const Trace* find(const std::string& case_id) const;

  bool operator==(const EventLog&) const = default;

 private:
  Schema schema_;
  std::vector<Trace> traces_;
};

// Removes traces with fewer than `min_length` events.
EventLog drop_short_traces(const EventLog& log, std::size_t min_length);

}  // namespace ppmx
