#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace rrie {

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

/// Strict parse of a whole field; throws IoError on trailing junk.
double parse_double(std::string_view text);

std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace rrie
