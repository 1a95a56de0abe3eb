#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ppmx {

// Shortest decimal text that parses back to the identical double.
std::string format_double(double value);

std::optional<double> parse_double(std::string_view text);

// Minimal RFC 4180 CSV: comma separated, double-quote escaping, LF or CRLF.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(in) {}
  // Returns false at end of input.
  bool next(std::vector<std::string>& fields);
  std::size_t line() const { return line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
};

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace ppmx
