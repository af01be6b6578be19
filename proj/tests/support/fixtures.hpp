#pragma once

#include <vector>

#include "n2rpp/preprocess.hpp"
#include "n2rpp/synthdata.hpp"

namespace n2rpp::fixture {

inline std::vector<PressureImage> cohort_images(std::size_t n_healthy, std::size_t n_acld,
                                                std::uint64_t seed,
                                                Aggregation agg = Aggregation::max,
                                                synth::SideMode sides = synth::SideMode::left) {
  synth::CohortSpec spec;
  spec.n_healthy = n_healthy;
  spec.n_acld = n_acld;
  spec.seed = seed;
  spec.sides = sides;
  std::vector<PressureImage> out;
  for (const auto& seq : synth::generate_cohort(spec)) out.push_back(preprocess::to_image(seq, agg));
  return out;
}

}  // namespace n2rpp::fixture
