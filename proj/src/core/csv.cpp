#include "cinnamon/csv.hpp"

#include <charconv>
#include <cmath>

#include "cinnamon/errors.hpp"

namespace cinnamon::csv {

std::string format_number(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, end);
}

std::vector<std::string> split(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.emplace_back(line.substr(start));
      return fields;
    }
    fields.emplace_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

double parse_number(const std::string& field, std::size_t line_no) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || !std::isfinite(value)) {
    throw ParseError("line " + std::to_string(line_no) + ": '" + field + "' is not a finite number");
  }
  return value;
}

void expect_header(std::istream& in, std::string_view expected) {
  std::string header;
  if (!std::getline(in, header)) throw ParseError("empty CSV, expected header '" + std::string(expected) + "'");
  if (!header.empty() && header.back() == '\r') header.pop_back();
  if (header != expected) {
    throw ParseError("unexpected CSV header '" + header + "', expected '" + std::string(expected) + "'");
  }
}

}  // namespace cinnamon::csv
