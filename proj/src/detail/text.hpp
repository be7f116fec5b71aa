#pragma once

#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>

namespace sg::detail {

/// Shortest decimal string that parses back to exactly `v`.
inline std::string double_to_string(double v) {
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  return buf;
}

/// Fixed 17-significant-digit form used in emitted files (round-trip exact).
inline std::string double_to_string17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

template <typename... Args>
std::string cat(Args&&... args) {
  std::ostringstream os;
  (os << ... << args);
  return os.str();
}

}  // namespace sg::detail
