#pragma once

#include <charconv>
#include <cstdio>
#include <string>
#include <system_error>

namespace schrolab {

/// Shortest representation that parses back to the same double.
inline std::string format_exact(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) return "nan";
  return std::string(buf, end);
}

/// Fixed-width scientific notation for human-readable reports.
inline std::string format_sci(double x, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*e", digits, x);
  return buf;
}

/// Strict parse of a whole token as a double.
inline bool parse_double(const std::string& token, double& out) {
  if (token.empty()) return false;
  const char* first = token.data();
  const char* last = first + token.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

inline bool parse_int(const std::string& token, long long& out) {
  if (token.empty()) return false;
  const char* first = token.data();
  const char* last = first + token.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

}  // namespace schrolab
