#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace ruelle {

/// Locale-independent shortest round-trip decimal form ("inf"/"-inf"/"nan"
/// for non-finite values).
inline std::string format_double(double x) {
  if (x == 0.0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

/// Fixed notation with `digits` decimals, never printing "-0.000...".
inline std::string format_fixed(double x, int digits) {
  char buf[128];
  auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::fixed, digits);
  std::string s(buf, res.ptr);
  if (s.size() > 1 && s[0] == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

}  // namespace ruelle
