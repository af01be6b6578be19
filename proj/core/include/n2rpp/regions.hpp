#pragma once

#include <array>
#include <cstddef>
#include <string_view>

namespace n2rpp {

// Foot regions as fixed row bands of a toe-up image:
// toes [0, 0.15), forefoot [0.15, 0.45), midfoot [0.45, 0.75), heel [0.75, 1].
enum class FootRegion { toes = 0, forefoot = 1, midfoot = 2, heel = 3 };

inline constexpr std::array<FootRegion, 4> kFootRegions = {
    FootRegion::toes, FootRegion::forefoot, FootRegion::midfoot, FootRegion::heel};

inline std::string_view to_string(FootRegion r) {
  constexpr std::array<std::string_view, 4> names = {"toes", "forefoot", "midfoot", "heel"};
  return names[static_cast<std::size_t>(r)];
}

inline FootRegion region_of_row(std::size_t row, std::size_t rows) {
  const double r = static_cast<double>(row);
  const double n = static_cast<double>(rows);
  if (r < 0.15 * n) return FootRegion::toes;
  if (r < 0.45 * n) return FootRegion::forefoot;
  if (r < 0.75 * n) return FootRegion::midfoot;
  return FootRegion::heel;
}

}  // namespace n2rpp
