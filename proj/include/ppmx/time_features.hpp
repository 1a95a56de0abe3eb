#pragma once

#include <array>
#include <string_view>

#include "ppmx/event_log.hpp"

namespace ppmx {

// Names of the derived per-event numeric features, in the order they are
// appended to the schema.
inline constexpr std::array<std::string_view, 7> kTimeFeatureNames = {
    "hour",
    "weekday",
    "month",
    "timesincemidnight",
    "timesincelastevent",
    "timesincecasestart",
    "event_nr",
};

// Adds the derived time features as dynamic numeric attributes. Times are in
// minutes, calendar fields in UTC, weekday 0 = Monday. Idempotent.
EventLog derive_time_features(const EventLog& log);

}  // namespace ppmx
