#pragma once

#include <algorithm>
#include <array>

namespace cubiclines {

// Possible numbers of rational lines on a smooth cubic surface over any field.
inline constexpr std::array<int, 9> kAdmissibleLineCounts = {0, 1, 2, 3, 5, 7, 9, 15, 27};
// Possible numbers of real lines on a smooth real cubic surface.
inline constexpr std::array<int, 4> kRealLineCounts = {3, 7, 15, 27};

inline bool is_admissible_line_count(int n) {
  return std::find(kAdmissibleLineCounts.begin(), kAdmissibleLineCounts.end(), n) != kAdmissibleLineCounts.end();
}

inline bool is_real_line_count(int n) {
  return std::find(kRealLineCounts.begin(), kRealLineCounts.end(), n) != kRealLineCounts.end();
}

}  // namespace cubiclines
