#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace suffopt {

// Shortest representation that parses back to the same double.
std::string format_double(double v);

// Fixed decimals; "-0.0" is printed as "0.0".
std::string format_fixed(double v, int decimals);

double parse_double(std::string_view text);  // throws std::invalid_argument
long parse_long(std::string_view text);

std::vector<std::string_view> split(std::string_view line, char sep);
std::string_view trim(std::string_view s);
std::vector<std::string_view> tokenize(std::string_view line);  // whitespace separated

}  // namespace suffopt
