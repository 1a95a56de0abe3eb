#include "ppmx/prefixing.hpp"

#include <algorithm>
#include <ostream>

#include "ppmx/csv_io.hpp"
#include "ppmx/error.hpp"
#include "ppmx/text.hpp"

namespace ppmx {

PrefixTrace::PrefixTrace(std::shared_ptr<const Trace> base, std::size_t length)
    : base_(std::move(base)), length_(length) {
  if (!base_ || length_ < 1 || length_ > base_->size())
    throw_data("BadPrefix", "prefix length out of range for its base trace");
}

std::size_t prefix_count(std::size_t n, std::size_t gap, std::size_t max_length) {
  if (n < 1 || gap < 1 || max_length < 1) throw_config("BadPrefixing", "n, gap and max length must be >= 1");
  return (std::min(n, max_length) - 1) / gap + 1;
}

std::vector<std::size_t> prefix_lengths(std::size_t n, std::size_t gap, std::size_t max_length) {
  const std::size_t count = prefix_count(n, gap, max_length);
  std::vector<std::size_t> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = 1 + i * gap;
  return out;
}

PrefixLog generate_prefix_log(const EventLog& log, std::size_t gap, std::size_t max_length) {
  if (gap < 1 || max_length < 1) throw_config("BadPrefixing", "gap and max length must be >= 1");
  if (log.empty()) throw_data("EmptyLog", "cannot prefix an empty log");
  if (!log.is_labeled()) throw_data("UnlabeledLog", "prefixing needs a labeled log");

  PrefixLog out;
  out.schema = log.schema();
  out.gap = gap;
  out.max_length = max_length;
  for (const auto& t : log.traces()) {
    auto base = std::make_shared<const Trace>(t);
    for (std::size_t len : prefix_lengths(t.size(), gap, max_length)) out.prefixes.emplace_back(base, len);
  }
  return out;
}

void write_prefix_log(std::ostream& out, const PrefixLog& plog, const std::string& timestamp_format) {
  const Schema& s = plog.schema;
  std::vector<std::string> header{s.case_id, s.activity, s.timestamp, "label", "base_case_id", "prefix_length"};
  for (const auto& a : s.attributes) header.push_back(a.name);
  write_csv_row(out, header);
  std::vector<std::string> row;
  for (const auto& p : plog.prefixes) {
    const std::string id = p.base_case_id() + "_" + std::to_string(p.prefix_length());
    for (const auto& e : p.events()) {
      row = {id, e.activity, format_timestamp(e.timestamp, timestamp_format),
             p.label() ? (*p.label() ? "1" : "0") : "", p.base_case_id(), std::to_string(p.prefix_length())};
      for (const auto& a : s.attributes) {
        const AttributeMap& src = a.scope == Scope::kStatic ? p.static_payload() : e.payload;
        auto it = src.find(a.name);
        std::string cell;
        if (it != src.end()) {
          if (auto d = as_number(it->second)) cell = format_double(*d);
          else if (auto c = as_category(it->second)) cell = *c;
        }
        row.push_back(std::move(cell));
      }
      write_csv_row(out, row);
    }
  }
}

}  // namespace ppmx
