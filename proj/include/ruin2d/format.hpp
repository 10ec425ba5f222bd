#pragma once

#include <charconv>
#include <string>

namespace ruin2d {

/// 12 significant digits, '.' decimal, independent of the locale.
inline std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

}  // namespace ruin2d
