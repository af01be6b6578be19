#include "n2rpp/synthdata.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "n2rpp/error.hpp"
#include "n2rpp/random.hpp"

namespace n2rpp::synth {
namespace {

struct Blob {
  double center;   // along the foot axis, -1 toes .. +1 heel
  double spread;   // along the foot axis
  double t_peak;   // stance phase of peak load
  double t_width;
};

// toes, forefoot, midfoot, heel
constexpr std::array<Blob, 4> kBlobs = {{
    {-0.80, 0.13, 0.82, 0.16},
    {-0.45, 0.18, 0.65, 0.22},
    {0.10, 0.25, 0.45, 0.28},
    {0.68, 0.18, 0.22, 0.20},
}};
constexpr double kLateralSpread = 0.45;
constexpr double kBaseContact = 0.15;

void check_params(const FootParams& p) {
  if (p.rows < 8 || p.cols < 8) throw Error("generate_foot: grid must be at least 8x8");
  if (p.frames < 1) throw Error("generate_foot: need at least one frame");
  if (!(p.length > 0.0 && p.length <= 1.0) || !(p.width > 0.0 && p.width <= 1.0)) {
    throw Error("generate_foot: length and width must be fractions in (0, 1]");
  }
  if (!(p.angle_deg >= -20.0 && p.angle_deg <= 20.0)) throw Error("generate_foot: angle outside [-20, 20]");
  if (!(p.noise >= 0.0 && p.noise <= 0.2)) throw Error("generate_foot: noise outside [0, 0.2]");
  const auto& l = p.loads;
  if (!(l.toes >= 0 && l.forefoot >= 0 && l.midfoot >= 0 && l.heel >= 0)) {
    throw Error("generate_foot: loads must be nonnegative");
  }
  if (!(p.pressure_scale > 0.0) || !(p.contact_threshold >= 0.0)) {
    throw Error("generate_foot: bad pressure scale or threshold");
  }
}

}  // namespace

PressureFrameSequence generate_foot(const FootParams& p) {
  check_params(p);
  const double cr = (static_cast<double>(p.rows) - 1.0) / 2.0;
  const double cc = (static_cast<double>(p.cols) - 1.0) / 2.0;
  const double half_len = p.length * static_cast<double>(p.rows) / 2.0;
  const double half_wid = p.width * static_cast<double>(p.cols) / 2.0;
  if (half_len < 2.0 || half_wid < 1.0) throw Error("generate_foot: foot too small for the grid");
  const double theta = p.angle_deg * std::numbers::pi / 180.0;
  const double cos_t = std::cos(theta), sin_t = std::sin(theta);
  const std::array<double, 4> loads = {p.loads.toes, p.loads.forefoot, p.loads.midfoot, p.loads.heel};

  // Spatial profile of each blob, and the foot mask, are frame-independent.
  const std::size_t cells = p.rows * p.cols;
  std::vector<std::array<double, 4>> profile(cells);
  std::vector<char> mask(cells, 0);
  for (std::size_t r = 0; r < p.rows; ++r) {
    for (std::size_t c = 0; c < p.cols; ++c) {
      const double dy = static_cast<double>(r) - cr;
      const double dx = static_cast<double>(c) - cc;
      const double s = (-dx * sin_t + dy * cos_t) / half_len;
      const double w = (dx * cos_t + dy * sin_t) / half_wid;
      const double taper = 1.0 - 0.3 * std::max(0.0, s);
      const std::size_t i = r * p.cols + c;
      mask[i] = s * s + (w / taper) * (w / taper) <= 1.0;
      for (std::size_t b = 0; b < 4; ++b) {
        const double ds = s - kBlobs[b].center;
        profile[i][b] = std::exp(-ds * ds / (2.0 * kBlobs[b].spread * kBlobs[b].spread) -
                                 w * w / (2.0 * kLateralSpread * kLateralSpread));
      }
    }
  }
  if (std::none_of(mask.begin(), mask.end(), [](char m) { return m != 0; })) {
    throw Error("generate_foot: empty foot mask");
  }

  Rng rng(p.seed);
  PressureFrameSequence seq;
  seq.rows = p.rows;
  seq.cols = p.cols;
  seq.side = p.side;
  for (std::size_t k = 0; k < p.frames; ++k) {
    const double t = (static_cast<double>(k) + 0.5) / static_cast<double>(p.frames);
    std::array<double, 4> env{};
    for (std::size_t b = 0; b < 4; ++b) {
      const double z = (t - kBlobs[b].t_peak) / kBlobs[b].t_width;
      env[b] = loads[b] * std::exp(-z * z);
    }
    const double base = kBaseContact * std::sin(std::numbers::pi * t);

    Grid frame(p.rows, p.cols);
    for (std::size_t i = 0; i < cells; ++i) {
      if (!mask[i]) continue;
      double v = base;
      for (std::size_t b = 0; b < 4; ++b) v += env[b] * profile[i][b];
      if (p.noise > 0.0) v *= 1.0 + p.noise * rng.normal();
      v *= p.pressure_scale;
      frame.values[i] = v >= p.contact_threshold ? v : 0.0;
    }
    if (p.side == FootSide::right) {
      for (std::size_t r = 0; r < p.rows; ++r) {
        std::reverse(frame.values.begin() + static_cast<std::ptrdiff_t>(r * p.cols),
                     frame.values.begin() + static_cast<std::ptrdiff_t>((r + 1) * p.cols));
      }
    }
    seq.frames.push_back(std::move(frame));
  }
  return seq;
}

void CohortSpec::validate() const {
  if (n_healthy < 1 || n_acld < 1) throw Error("cohort counts must be >= 1");
  if (!(acld_heel_delta >= 0.0 && acld_heel_delta <= 1.0) ||
      !(acld_toe_delta >= 0.0 && acld_toe_delta <= 1.0)) {
    throw Error("ACLD load deltas must lie in [0, 1]");
  }
}

FootParams cohort_foot_params(const CohortSpec& spec, std::size_t index) {
  const bool acld = index >= spec.n_healthy;
  const std::size_t local = acld ? index - spec.n_healthy : index;
  Rng rng(derive_seed(spec.seed, index));

  FootParams p;
  p.rows = spec.rows;
  p.cols = spec.cols;
  p.frames = spec.frames;
  p.noise = spec.noise;
  p.length = rng.uniform(0.74, 0.86);
  p.width = rng.uniform(0.32, 0.40);
  p.angle_deg = std::clamp(rng.normal(0.0, 5.0), -20.0, 20.0);
  p.loads.toes = spec.base.toes * rng.uniform(0.85, 1.15);
  p.loads.forefoot = spec.base.forefoot * rng.uniform(0.85, 1.15);
  p.loads.midfoot = spec.base.midfoot * rng.uniform(0.85, 1.15);
  p.loads.heel = spec.base.heel * rng.uniform(0.85, 1.15);
  if (acld) {
    p.loads.heel *= 1.0 - spec.acld_heel_delta;
    p.loads.toes *= 1.0 - spec.acld_toe_delta;
  }
  switch (spec.sides) {
    case SideMode::left: p.side = FootSide::left; break;
    case SideMode::right: p.side = FootSide::right; break;
    case SideMode::both: p.side = local % 2 == 0 ? FootSide::left : FootSide::right; break;
  }
  p.seed = rng.next_u64();
  return p;
}

std::vector<PressureFrameSequence> generate_cohort(const CohortSpec& spec) {
  spec.validate();
  std::vector<PressureFrameSequence> out;
  out.reserve(spec.n_healthy + spec.n_acld);
  for (std::size_t i = 0; i < spec.n_healthy + spec.n_acld; ++i) {
    const bool acld = i >= spec.n_healthy;
    PressureFrameSequence seq = generate_foot(cohort_foot_params(spec, i));
    char id[16];
    std::snprintf(id, sizeof id, "%c%04zu", acld ? 'A' : 'H', acld ? i - spec.n_healthy : i);
    seq.case_id = id;
    seq.label = acld ? Label::acld : Label::healthy;
    out.push_back(std::move(seq));
  }
  return out;
}

}  // namespace n2rpp::synth
