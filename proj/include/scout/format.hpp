#pragma once

#include <charconv>
#include <cmath>
#include <string>
#include <string_view>

namespace scout {

/// Shortest round-trip decimal form; NaN prints as empty (missing in CSV).
inline std::string fmt_double(double v) {
  if (std::isnan(v)) return {};
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

/// Quotes a CSV field when it contains a delimiter, quote or newline.
inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace scout
