#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace hesn {

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

/// Whole-string parse; false on any trailing characters.
bool parse_double(std::string_view text, double& out);
bool parse_long(std::string_view text, long& out);

std::string_view trim(std::string_view text);
std::vector<std::string> split(std::string_view text, char sep);

/// 64-bit FNV-1a, printed as 16 hex digits.
std::string fnv1a_hex(std::string_view data);

}  // namespace hesn
