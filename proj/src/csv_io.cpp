#include "ppmx/csv_io.hpp"

#include <time.h>

#include <cctype>
#include <ctime>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "ppmx/error.hpp"
#include "ppmx/text.hpp"

namespace ppmx {

Schema ColumnMapping::schema() const {
  Schema s;
  s.case_id = case_id;
  s.activity = activity;
  s.timestamp = timestamp;
  s.attributes = attributes;
  return s;
}

TimestampMs parse_timestamp(const std::string& text, const std::string& format) {
  std::tm tm{};
  const char* rest = strptime(text.c_str(), format.c_str(), &tm);
  if (!rest) throw_data("BadTimestamp", "cannot parse '" + text + "' with format '" + format + "'");
  std::int64_t millis = 0;
  if (*rest == '.') {
    ++rest;
    int digits = 0;
    while (std::isdigit(static_cast<unsigned char>(*rest))) {
      if (digits < 3) millis = millis * 10 + (*rest - '0');
      ++digits;
      ++rest;
    }
    if (digits == 0) throw_data("BadTimestamp", "dangling fraction in '" + text + "'");
    for (; digits < 3; ++digits) millis *= 10;
  }
  if (*rest == 'Z') ++rest;
  if (*rest != '\0') throw_data("BadTimestamp", "trailing characters in '" + text + "'");
  const std::int64_t seconds = timegm(&tm);
  return seconds * 1000 + millis;
}

std::string format_timestamp(TimestampMs ts, const std::string& format) {
  std::int64_t seconds = ts / 1000;
  std::int64_t millis = ts % 1000;
  if (millis < 0) {
    millis += 1000;
    seconds -= 1;
  }
  std::time_t t = static_cast<std::time_t>(seconds);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[128];
  std::size_t n = std::strftime(buf, sizeof(buf), format.c_str(), &tm);
  std::string out(buf, n);
  if (millis != 0) {
    char frac[8];
    std::snprintf(frac, sizeof(frac), ".%03d", static_cast<int>(millis));
    out += frac;
  }
  return out;
}

namespace {

Value parse_cell(const std::string& cell, DType dtype, const std::string& column, std::size_t line) {
  if (cell.empty()) return std::monostate{};
  if (dtype == DType::kCategorical) return cell;
  auto v = parse_double(cell);
  if (!v) throw_data("BadNumber", "column '" + column + "' line " + std::to_string(line) + ": '" + cell + "'");
  return *v;
}

std::optional<bool> parse_label(const std::string& cell, std::size_t line) {
  if (cell.empty()) return std::nullopt;
  if (cell == "1" || cell == "true" || cell == "True") return true;
  if (cell == "0" || cell == "false" || cell == "False") return false;
  throw_data("BadLabel", "line " + std::to_string(line) + ": '" + cell + "'");
}

std::string render_cell(const Value& v) {
  if (const double* d = std::get_if<double>(&v)) return format_double(*d);
  if (const std::string* s = std::get_if<std::string>(&v)) return *s;
  return {};
}

}  // namespace

EventLog read_event_log(std::istream& in, const ColumnMapping& mapping) {
  Schema schema = mapping.schema();
  schema.validate();

  CsvReader reader(in);
  std::vector<std::string> header;
  if (!reader.next(header)) throw_data("EmptyFile", "no header row");
  if (!header.empty() && header[0].rfind("\xEF\xBB\xBF", 0) == 0) header[0].erase(0, 3);

  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (!index.emplace(header[i], i).second) throw_data("DuplicateColumn", "header repeats '" + header[i] + "'");
  }
  auto column = [&](const std::string& name) {
    auto it = index.find(name);
    if (it == index.end()) throw_data("MissingColumn", "column '" + name + "' not in header");
    return it->second;
  };
  const std::size_t case_col = column(mapping.case_id);
  const std::size_t act_col = column(mapping.activity);
  const std::size_t ts_col = column(mapping.timestamp);
  std::optional<std::size_t> label_col;
  if (mapping.label) label_col = column(*mapping.label);
  std::vector<std::size_t> attr_cols;
  for (const auto& a : schema.attributes) attr_cols.push_back(column(a.name));

  for (const auto& h : header) {
    bool known = h == mapping.case_id || h == mapping.activity || h == mapping.timestamp ||
                 (mapping.label && h == *mapping.label) || schema.find(h) != nullptr;
    for (const auto& ig : mapping.ignore) known = known || ig == h;
    if (!known) throw_data("UnclassifiedColumn", "column '" + h + "' is not mapped");
  }

  struct Pending {
    Trace trace;
    bool label_seen = false;
  };
  std::map<std::string, Pending> cases;
  std::vector<std::string> row;
  while (reader.next(row)) {
    const std::size_t line = reader.line();
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() != header.size())
      throw_data("MalformedCsv", "line " + std::to_string(line) + " has " + std::to_string(row.size()) +
                                     " fields, expected " + std::to_string(header.size()));
    const std::string& case_id = row[case_col];
    if (case_id.empty()) throw_data("MissingValue", "empty case id at line " + std::to_string(line));
    Pending& p = cases[case_id];
    const bool first = p.trace.events.empty();
    if (first) p.trace.case_id = case_id;

    Event e;
    e.activity = row[act_col];
    if (e.activity.empty()) throw_data("MissingValue", "empty activity at line " + std::to_string(line));
    e.timestamp = parse_timestamp(row[ts_col], mapping.timestamp_format);

    if (label_col) {
      auto lbl = parse_label(row[*label_col], line);
      if (lbl) {
        if (p.trace.label && *p.trace.label != *lbl)
          throw_data("InconsistentLabel", "case '" + case_id + "' has conflicting labels");
        p.trace.label = lbl;
      }
    }

    for (std::size_t a = 0; a < schema.attributes.size(); ++a) {
      const AttributeSpec& spec = schema.attributes[a];
      Value v = parse_cell(row[attr_cols[a]], spec.dtype, spec.name, line);
      if (spec.scope == Scope::kDynamic) {
        e.payload.emplace(spec.name, std::move(v));
        continue;
      }
      auto [it, inserted] = p.trace.static_payload.emplace(spec.name, v);
      if (inserted || is_null(v)) continue;
      if (is_null(it->second)) {
        it->second = std::move(v);
      } else if (it->second != v) {
        throw_data("InconsistentStatic", "static attribute '" + spec.name + "' varies within case '" + case_id + "'");
      }
    }
    p.trace.events.push_back(std::move(e));
  }

  std::vector<Trace> traces;
  traces.reserve(cases.size());
  for (auto& [id, p] : cases) traces.push_back(std::move(p.trace));
  return EventLog(std::move(schema), std::move(traces));
}

EventLog ingest_csv(const std::string& path, const ColumnMapping& mapping) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_data("FileNotFound", "cannot open " + path);
  return read_event_log(in, mapping);
}

ColumnMapping export_mapping(const EventLog& log, const std::string& timestamp_format) {
  const Schema& s = log.schema();
  ColumnMapping m;
  m.case_id = s.case_id;
  m.activity = s.activity;
  m.timestamp = s.timestamp;
  m.timestamp_format = timestamp_format;
  m.attributes = s.attributes;
  bool any_label = false;
  for (const auto& t : log.traces()) any_label = any_label || t.label.has_value();
  if (any_label) {
    std::string name = "label";
    while (s.find(name) || name == s.case_id || name == s.activity || name == s.timestamp) name = "_" + name;
    m.label = name;
  }
  return m;
}

void write_event_log(std::ostream& out, const EventLog& log, const ColumnMapping& mapping) {
  std::vector<std::string> header{mapping.case_id, mapping.activity, mapping.timestamp};
  if (mapping.label) header.push_back(*mapping.label);
  for (const auto& a : mapping.attributes) header.push_back(a.name);
  write_csv_row(out, header);

  std::vector<std::string> row;
  for (const auto& t : log.traces()) {
    for (const auto& e : t.events) {
      row.clear();
      row.push_back(t.case_id);
      row.push_back(e.activity);
      row.push_back(format_timestamp(e.timestamp, mapping.timestamp_format));
      if (mapping.label) row.push_back(t.label ? (*t.label ? "1" : "0") : "");
      for (const auto& a : mapping.attributes) {
        const AttributeMap& src = a.scope == Scope::kStatic ? t.static_payload : e.payload;
        auto it = src.find(a.name);
        row.push_back(it == src.end() ? std::string{} : render_cell(it->second));
      }
      write_csv_row(out, row);
    }
  }
}

void export_csv(const std::string& path, const EventLog& log, const ColumnMapping& mapping) {
  std::ostringstream ss;
  write_event_log(ss, log, mapping);
  write_file(path, ss.str());
}

}  // namespace ppmx
