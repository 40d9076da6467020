#pragma once

// Small helpers for the colon/comma spec-string syntax.

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ergolab/errors.hpp"

namespace ergolab::text {

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t next = s.find(sep, pos);
    out.emplace_back(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

inline std::int64_t parse_i64(std::string_view s, std::string_view what) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw ParseError("bad integer in " + std::string(what) + ": '" + std::string(s) + "'", 0);
  return v;
}

/// "key=value" -> (key, value); value empty when there is no '='.
inline std::pair<std::string, std::string> key_value(std::string_view s) {
  std::size_t eq = s.find('=');
  if (eq == std::string_view::npos) return {std::string(s), ""};
  return {std::string(s.substr(0, eq)), std::string(s.substr(eq + 1))};
}

}  // namespace ergolab::text
