#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace txguard::util {

// Minimal RFC 4180 support: quoted fields, doubled quotes, no embedded newlines.
std::vector<std::string> split_csv_line(std::string_view line);
std::string csv_escape(std::string_view field);
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

// Shortest string that parses back to the same double.
std::string format_double(double value);
double parse_double(std::string_view text);

}  // namespace txguard::util
