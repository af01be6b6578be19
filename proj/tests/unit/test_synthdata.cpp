#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "n2rpp/error.hpp"
#include "n2rpp/preprocess.hpp"
#include "n2rpp/saliency.hpp"
#include "n2rpp/synthdata.hpp"

namespace n2rpp::synth {
namespace {

double heel_band_mean(const PressureFrameSequence& s) {
  const Grid g = preprocess::aggregate_max(s);
  double total = 0.0;
  std::size_t n = 0;
  for (std::size_t r = 0; r < g.rows; ++r) {
    if (region_of_row(r, g.rows) != FootRegion::heel) continue;
    for (std::size_t c = 0; c < g.cols; ++c, ++n) total += g(r, c);
  }
  return total / static_cast<double>(n);
}

double cohort_heel_gap(const CohortSpec& spec) {
  const auto cohort = generate_cohort(spec);
  double healthy = 0.0, acld = 0.0;
  for (const auto& s : cohort) {
    const double v = saliency::region_stats(preprocess::to_image(s, Aggregation::max).grid)[FootRegion::heel];
    (s.label == Label::healthy ? healthy : acld) += v;
  }
  return healthy / spec.n_healthy - acld / spec.n_acld;
}

TEST(Foot, Deterministic) {
  FootParams p;
  p.seed = 9;
  p.angle_deg = 7.0;
  EXPECT_EQ(generate_foot(p), generate_foot(p));
  FootParams q = p;
  q.seed = 10;
  EXPECT_NE(generate_foot(p), generate_foot(q));
}

TEST(Foot, MirrorSymmetricWithoutNoiseOrAngle) {
  FootParams p;
  p.noise = 0.0;
  const auto s = generate_foot(p);
  for (const Grid& f : s.frames)
    for (std::size_t r = 0; r < f.rows; ++r)
      for (std::size_t c = 0; c < f.cols; ++c) EXPECT_NEAR(f(r, c), f(r, f.cols - 1 - c), 1e-9);
}

TEST(Foot, RightIsColumnMirrorOfLeft) {
  FootParams p;
  p.angle_deg = 12.0;
  p.seed = 4;
  const auto left = generate_foot(p);
  p.side = FootSide::right;
  const auto right = generate_foot(p);
  EXPECT_EQ(right.side, FootSide::right);
  for (std::size_t k = 0; k < left.frames.size(); ++k)
    for (std::size_t r = 0; r < p.rows; ++r)
      for (std::size_t c = 0; c < p.cols; ++c)
        EXPECT_EQ(right.frames[k](r, c), left.frames[k](r, p.cols - 1 - c));
}

TEST(Foot, HeelLoadIsMonotone) {
  double prev = -1.0;
  for (double heel : {0.3, 0.6, 0.9, 1.2}) {
    FootParams p;
    p.noise = 0.0;
    p.loads.heel = heel;
    const double m = heel_band_mean(generate_foot(p));
    EXPECT_GT(m, prev) << "heel load " << heel;
    prev = m;
  }
}

TEST(Foot, ShapeAndValidity) {
  FootParams p;
  p.rows = 40;
  p.cols = 28;
  p.frames = 5;
  const auto s = generate_foot(p);
  EXPECT_EQ(s.rows, 40u);
  EXPECT_EQ(s.cols, 28u);
  EXPECT_EQ(s.frames.size(), 5u);
  EXPECT_NO_THROW(preprocess::validate(s));
}

TEST(Foot, RejectsInvalidParams) {
  auto bad = [](auto mutate) {
    FootParams p;
    mutate(p);
    return p;
  };
  EXPECT_THROW(generate_foot(bad([](FootParams& p) { p.angle_deg = 25.0; })), Error);
  EXPECT_THROW(generate_foot(bad([](FootParams& p) { p.noise = 0.3; })), Error);
  EXPECT_THROW(generate_foot(bad([](FootParams& p) { p.loads.toes = -0.1; })), Error);
  EXPECT_THROW(generate_foot(bad([](FootParams& p) { p.rows = 0; })), Error);
  EXPECT_THROW(generate_foot(bad([](FootParams& p) { p.frames = 0; })), Error);
}

TEST(Cohort, CountsLabelsAndIds) {
  CohortSpec spec;
  spec.n_healthy = 7;
  spec.n_acld = 5;
  const auto c = generate_cohort(spec);
  ASSERT_EQ(c.size(), 12u);
  for (std::size_t i = 0; i < c.size(); ++i) {
    EXPECT_EQ(c[i].label, i < 7 ? Label::healthy : Label::acld);
    EXPECT_EQ(c[i].frames.size(), spec.frames);
    EXPECT_NO_THROW(preprocess::validate(c[i]));
  }
  EXPECT_EQ(c[0].case_id, "H0000");
  EXPECT_EQ(c[7].case_id, "A0000");
  EXPECT_EQ(c[0].side, FootSide::left);
  EXPECT_EQ(c[1].side, FootSide::right);
  EXPECT_EQ(generate_cohort(spec), c);
}

TEST(Cohort, RejectsInvalidSpec) {
  CohortSpec spec;
  spec.n_acld = 0;
  EXPECT_THROW(generate_cohort(spec), Error);
  spec = CohortSpec{};
  spec.acld_heel_delta = 1.5;
  EXPECT_THROW(generate_cohort(spec), Error);
}

TEST(Cohort, AcldHasLighterHeels) {
  CohortSpec spec;
  spec.n_healthy = 60;
  spec.n_acld = 60;
  spec.sides = SideMode::left;
  EXPECT_GT(cohort_heel_gap(spec), 0.0);
}

TEST(Cohort, ZeroDeltaIsIndistinguishable) {
  CohortSpec spec;
  spec.n_healthy = 60;
  spec.n_acld = 60;
  spec.acld_heel_delta = 0.0;
  spec.acld_toe_delta = 0.0;
  spec.sides = SideMode::left;
  EXPECT_LT(std::abs(cohort_heel_gap(spec)), spec.noise);
}

TEST(Cohort, NoCollisionsAcrossThousandSamples) {
  CohortSpec spec;
  spec.n_healthy = 500;
  spec.n_acld = 500;
  spec.rows = 24;
  spec.cols = 16;
  spec.frames = 2;
  std::set<std::vector<double>> seen;
  for (const auto& s : generate_cohort(spec)) {
    std::vector<double> flat;
    for (const auto& f : s.frames) flat.insert(flat.end(), f.values.begin(), f.values.end());
    seen.insert(std::move(flat));
  }
  EXPECT_EQ(seen.size(), 1000u);
}

TEST(Cohort, JitteredParamsStayValid) {
  CohortSpec spec;
  for (std::size_t i = 0; i < spec.n_healthy + spec.n_acld; ++i) {
    const FootParams p = cohort_foot_params(spec, i);
    EXPECT_LE(std::abs(p.angle_deg), 20.0);
    EXPECT_GE(p.loads.heel, 0.0);
    EXPECT_GE(p.loads.toes, 0.0);
    EXPECT_EQ(p.side, i % 2 == 0 ? FootSide::left : FootSide::right);
  }
}

}  // namespace
}  // namespace n2rpp::synth
