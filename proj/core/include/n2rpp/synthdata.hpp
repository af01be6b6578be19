#pragma once

#include <cstdint>
#include <vector>

#include "n2rpp/types.hpp"

namespace n2rpp::synth {

// Peak loads per region, in normalized pressure.
struct RegionLoads {
  double toes = 0.6;
  double forefoot = 1.0;
  double midfoot = 0.35;
  double heel = 0.9;
};

struct FootParams {
  std::size_t rows = 64;
  std::size_t cols = 64;
  std::size_t frames = 12;
  double length = 0.80;    // fraction of rows
  double width = 0.36;     // fraction of cols
  double angle_deg = 0.0;  // foot progression angle, [-20, 20]
  RegionLoads loads;
  double noise = 0.05;     // multiplicative, [0, 0.2]
  FootSide side = FootSide::left;
  std::uint64_t seed = 1;
  double pressure_scale = 100.0;  // sensor units per normalized unit
  double contact_threshold = 1.0; // sensor units; smaller readings are 0
};

// Elliptical foot mask with four Gaussian load blobs (toes, forefoot, midfoot,
// heel) driven by a heel-to-toe stance envelope over K frames. Right feet
// are the column mirror of left feet.
PressureFrameSequence generate_foot(const FootParams& p);

enum class SideMode { both, left, right };

struct CohortSpec {
  std::size_t n_healthy = 100;
  std::size_t n_acld = 100;
  // Relative load reductions applied to ACLD feet.
  double acld_heel_delta = 0.3;
  double acld_toe_delta = 0.2;
  std::size_t frames = 12;
  std::size_t rows = 64;
  std::size_t cols = 64;
  double noise = 0.05;
  SideMode sides = SideMode::both;
  RegionLoads base;
  std::uint64_t seed = 42;

  void validate() const;
};

// Healthy cases first (case ids H0000...), then ACLD (A0000...). With
// SideMode::both, even indices are left feet and odd indices right feet.
std::vector<PressureFrameSequence> generate_cohort(const CohortSpec& spec);

// Per-sample parameters used by generate_cohort for item `index`.
FootParams cohort_foot_params(const CohortSpec& spec, std::size_t index);

}  // namespace n2rpp::synth
