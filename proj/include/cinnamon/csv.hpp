#pragma once

#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace cinnamon::csv {

/// Shortest decimal text that parses back to the same double.
std::string format_number(double value);

/// Plain comma split; fields never contain commas or quotes in our datasets.
std::vector<std::string> split(std::string_view line);

/// Throws ParseError with the offending field and line number.
double parse_number(const std::string& field, std::size_t line_no);

/// Reads the header line and checks it matches `expected` exactly.
void expect_header(std::istream& in, std::string_view expected);

}  // namespace cinnamon::csv
