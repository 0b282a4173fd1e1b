#pragma once

#include <charconv>
#include <string>

namespace powercf {

/// Shortest round-trip representation of a double.
inline std::string num(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace powercf
