#include "ppmx/time_features.hpp"

#include <ctime>
#include <string>

#include "ppmx/error.hpp"

namespace ppmx {

namespace {

constexpr std::int64_t kMsPerDay = 86'400'000;

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

EventLog derive_time_features(const EventLog& log) {
  Schema schema = log.schema();
  for (std::string_view name : kTimeFeatureNames) {
    const std::string n(name);
    if (const AttributeSpec* existing = schema.find(n)) {
      if (existing->scope != Scope::kDynamic || existing->dtype != DType::kNumeric)
        throw_config("DuplicateAttribute", "attribute '" + n + "' clashes with a derived time feature");
      continue;
    }
    schema.attributes.push_back({n, Scope::kDynamic, DType::kNumeric});
  }

  std::vector<Trace> traces = log.traces();
  for (auto& t : traces) {
    double since_start = 0.0;
    for (std::size_t i = 0; i < t.events.size(); ++i) {
      Event& e = t.events[i];
      const std::int64_t day = floor_div(e.timestamp, kMsPerDay);
      const std::int64_t ms_of_day = e.timestamp - day * kMsPerDay;
      std::time_t secs = static_cast<std::time_t>(day * 86'400);
      std::tm tm{};
      gmtime_r(&secs, &tm);

      const double since_last =
          i == 0 ? 0.0 : static_cast<double>(e.timestamp - t.events[i - 1].timestamp) / 60000.0;
      since_start += since_last;

      e.payload["hour"] = static_cast<double>(ms_of_day / 3'600'000);
      // 1970-01-01 was a Thursday.
      e.payload["weekday"] = static_cast<double>(((day + 3) % 7 + 7) % 7);
      e.payload["month"] = static_cast<double>(tm.tm_mon + 1);
      e.payload["timesincemidnight"] = static_cast<double>(ms_of_day) / 60000.0;
      e.payload["timesincelastevent"] = since_last;
      e.payload["timesincecasestart"] = since_start;
      e.payload["event_nr"] = static_cast<double>(i + 1);
    }
  }
  return EventLog(std::move(schema), std::move(traces));
}

}  // namespace ppmx
