#pragma once

#include <cstdio>
#include <string>
#include <vector>

namespace mecoff {

// CSV numeric format: 9 significant digits, '.' separator, locale-free.
inline std::string format_g9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

inline std::string join_csv(const std::vector<std::string>& cells) {
  std::string row;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) row.push_back(',');
    row += cells[i];
  }
  return row;
}

}  // namespace mecoff
