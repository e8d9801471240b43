#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace ptpq {

// Shortest decimal that round-trips to the same double. Non-finite values
// become "nan", "inf" or "-inf".
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, end);
}

}  // namespace ptpq
