#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ppmx/event_log.hpp"

namespace ppmx {

inline constexpr std::size_t kUnboundedPrefixLength = std::numeric_limits<std::size_t>::max();

// Contiguous head of a base trace. Shares the base trace, so copies are cheap.
class PrefixTrace {
 public:
  PrefixTrace(std::shared_ptr<const Trace> base, std::size_t length);

  const std::string& base_case_id() const { return base_->case_id; }
  std::size_t prefix_length() const { return length_; }
  std::span<const Event> events() const { return {base_->events.data(), length_}; }
  const AttributeMap& static_payload() const { return base_->static_payload; }
  std::optional<bool> label() const { return base_->label; }
  const Trace& base() const { return *base_; }

 private:
  std::shared_ptr<const Trace> base_;
  std::size_t length_;
};

struct PrefixLog {
  Schema schema;
  std::size_t gap = 5;
  std::size_t max_length = 20;
  // Ordered by (base case id, prefix length).
  std::vector<PrefixTrace> prefixes;
};

// Number of prefixes of a trace of length n: floor((min(n, k) - 1) / g) + 1.
std::size_t prefix_count(std::size_t n, std::size_t gap, std::size_t max_length);

// Lengths 1, 1+g, 1+2g, ... up to min(n, k).
std::vector<std::size_t> prefix_lengths(std::size_t n, std::size_t gap, std::size_t max_length);

PrefixLog generate_prefix_log(const EventLog& log, std::size_t gap, std::size_t max_length);

// Event-log CSV layout plus base_case_id and prefix_length columns; the case id
// column carries "<base>_<length>".
void write_prefix_log(std::ostream& out, const PrefixLog& plog, const std::string& timestamp_format);

}  // namespace ppmx
