#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace qal {

/// Shortest round-trip decimal; "inf" / "-inf" / "nan" for non-finite values.
inline std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

}  // namespace qal
