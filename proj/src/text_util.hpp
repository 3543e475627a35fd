#pragma once

// Internal helpers for the line-oriented text formats. Parsing goes through
// std::from_chars so the decimal separator never depends on locale.

#include <charconv>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "egorig/error.hpp"

namespace egorig::detail {

inline std::string_view trim(std::string_view s) {
  const char* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::string_view stripComment(std::string_view s) {
  const auto pos = s.find('#');
  return pos == std::string_view::npos ? s : s.substr(0, pos);
}

inline std::vector<std::string_view> splitWhitespace(std::string_view s) {
  std::vector<std::string_view> out;
  size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::vector<std::string_view> splitChar(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      break;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

// `where` names the source location for error messages, e.g. "walk.csv line 3".
inline double parseDouble(std::string_view token, const std::string& where) {
  const std::string_view t = trim(token);
  double value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size())
    throw ParseError(where + ": expected a number, got '" + std::string(t) + "'");
  if (!std::isfinite(value))
    throw ParseError(where + ": non-finite value '" + std::string(t) + "'");
  return value;
}

inline long parseInt(std::string_view token, const std::string& where) {
  const std::string_view t = trim(token);
  long value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size())
    throw ParseError(where + ": expected an integer, got '" + std::string(t) + "'");
  return value;
}

// Shortest exact decimal form (printf %.17g round-trips doubles).
inline std::string formatDouble(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace egorig::detail
