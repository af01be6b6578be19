#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "n2rpp/error.hpp"
#include "n2rpp/saliency.hpp"
#include "oracles.hpp"

namespace n2rpp::saliency {
namespace {

PressureImage image_of(const Grid& g, double p_min = 0.0, double p_max = 1.0) {
  PressureImage img;
  img.grid = g;
  img.p_min = p_min;
  img.p_max = p_max;
  return img;
}

PressureImage random_image(Rng& rng, double p_min = 0.0, double p_max = 1.0) {
  Grid g(kImageRows, kImageCols);
  for (double& v : g.values) v = rng.uniform();
  return image_of(g, p_min, p_max);
}

TEST(Diff, Examples) {
  Rng rng(1);
  const auto x = random_image(rng);
  EXPECT_EQ(diff_heatmap(x, x).grid, Grid(kImageRows, kImageCols));
  const auto d = diff_heatmap(image_of(Grid(kImageRows, kImageCols, 0.2)), image_of(Grid(kImageRows, kImageCols, 0.5)));
  for (double v : d.grid.values) EXPECT_NEAR(v, 0.3, 1e-15);
}

TEST(Diff, AntisymmetricAndSigned) {
  Rng rng(2);
  for (int t = 0; t < 10; ++t) {
    const auto a = random_image(rng), b = random_image(rng);
    const auto ab = diff_heatmap(a, b), ba = diff_heatmap(b, a);
    for (std::size_t i = 0; i < ab.grid.size(); ++i) {
      EXPECT_EQ(ab.grid.values[i], -ba.grid.values[i]);
      EXPECT_EQ(ab.grid.values[i], b.grid.values[i] - a.grid.values[i]);
    }
  }
}

TEST(Diff, LinearInEachArgument) {
  Rng rng(3);
  const auto o = random_image(rng), r1 = random_image(rng), r2 = random_image(rng);
  auto sum = r1;
  for (std::size_t i = 0; i < sum.grid.size(); ++i) sum.grid.values[i] += r2.grid.values[i];
  const auto zero = image_of(Grid(kImageRows, kImageCols));
  const auto lhs = diff_heatmap(o, sum);
  const auto a = diff_heatmap(o, r1), b = diff_heatmap(zero, r2);
  for (std::size_t i = 0; i < lhs.grid.size(); ++i) EXPECT_NEAR(lhs.grid.values[i], a.grid.values[i] + b.grid.values[i], 1e-15);
}

TEST(Diff, AbsoluteUnits) {
  Rng rng(4);
  const auto a = random_image(rng, 2.0, 12.0), b = random_image(rng, 2.0, 12.0);
  const auto shared = diff_heatmap(a, b);
  for (std::size_t i = 0; i < shared.grid.size(); ++i)
    EXPECT_NEAR(shared.absolute.values[i], 10.0 * shared.grid.values[i], 1e-12);

  const auto c = random_image(rng, 0.0, 40.0);
  const auto mixed = diff_heatmap(a, c);
  for (std::size_t i = 0; i < mixed.grid.size(); ++i) {
    const double want = (40.0 * c.grid.values[i]) - (10.0 * a.grid.values[i] + 2.0);
    EXPECT_NEAR(mixed.absolute.values[i], want, 1e-12);
  }
}

TEST(Diff, ShapeMismatchRejected) {
  EXPECT_THROW(diff_heatmap(image_of(Grid(2, 2)), image_of(Grid(2, 3))), Error);
}

TEST(Regions, Examples) {
  const auto zero = region_stats(Grid(kImageRows, kImageCols));
  for (double m : zero.mean) EXPECT_EQ(m, 0.0);

  Grid heel(kImageRows, kImageCols);
  for (std::size_t r = 39; r < kImageRows; ++r)
    for (std::size_t c = 0; c < kImageCols; ++c) heel(r, c) = 1.0;
  const auto s = region_stats(heel);
  EXPECT_GT(s[FootRegion::heel], 0.0);
  EXPECT_EQ(s[FootRegion::toes], 0.0);
  EXPECT_EQ(s[FootRegion::forefoot], 0.0);
  EXPECT_EQ(s[FootRegion::midfoot], 0.0);
  EXPECT_EQ(s.cells[static_cast<std::size_t>(FootRegion::heel)], 13u * kImageCols);
}

TEST(Regions, BandBoundaries) {
  EXPECT_EQ(region_of_row(0, 52), FootRegion::toes);
  EXPECT_EQ(region_of_row(7, 52), FootRegion::toes);      // 7 < 7.8
  EXPECT_EQ(region_of_row(8, 52), FootRegion::forefoot);
  EXPECT_EQ(region_of_row(23, 52), FootRegion::forefoot);  // 23 < 23.4
  EXPECT_EQ(region_of_row(24, 52), FootRegion::midfoot);
  EXPECT_EQ(region_of_row(38, 52), FootRegion::midfoot);   // 38 < 39
  EXPECT_EQ(region_of_row(39, 52), FootRegion::heel);
  EXPECT_EQ(region_of_row(51, 52), FootRegion::heel);
}

TEST(Regions, WeightedMeansRecoverGlobalMean) {
  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    Grid g(kImageRows, kImageCols);
    double total = 0.0;
    for (double& v : g.values) total += (v = rng.uniform(-1.0, 1.0));
    const auto s = region_stats(g);
    double weighted = 0.0;
    std::size_t cells = 0;
    for (std::size_t r = 0; r < 4; ++r) {
      weighted += s.mean[r] * static_cast<double>(s.cells[r]);
      cells += s.cells[r];
    }
    EXPECT_EQ(cells, g.size());
    EXPECT_NEAR(weighted / cells, total / g.size(), 1e-12);
  }
}

nn::Network positive_net(std::uint64_t seed) {
  nn::Network net({nn::LayerSpec::conv2d("c", 1, 2), nn::LayerSpec::leaky_relu(0.2), nn::LayerSpec::flatten(),
                   nn::LayerSpec::dense("d1", 2 * 4 * 3, 5), nn::LayerSpec::relu(), nn::LayerSpec::dense("d2", 5, 1)},
                  {1, 8, 6}, seed);
  for (auto& p : net.mutable_params())
    for (double& v : p.tensor.values()) v = std::abs(v) + 0.01;
  return net;
}

TEST(Guided, EqualsPlainGradientWithoutNegativeSignals) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto net = positive_net(seed);
    Rng rng(seed);
    const Tensor x = oracle::random_tensor({1, 1, 8, 6}, rng, 0.0, 1.0);
    const Tensor up({1, 1}, 1.0);
    nn::BackwardOptions plain;
    plain.param_grads = false;
    const auto fwd = net.forward(x);
    EXPECT_EQ(guided_input_gradient(net, x, up), net.backward(fwd.cache, up, plain).input);
  }
}

TEST(Guided, EqualsPlainGradientWithoutRectifiers) {
  Rng rng(6);
  nn::Network net({nn::LayerSpec::conv2d("c", 1, 2), nn::LayerSpec::sigmoid(), nn::LayerSpec::flatten(),
                   nn::LayerSpec::dense("d", 2 * 4 * 3, 1)},
                  {1, 8, 6}, 7);
  const Tensor x = oracle::random_tensor({1, 1, 8, 6}, rng);
  const Tensor up({1, 1}, -1.0);
  nn::BackwardOptions plain;
  plain.param_grads = false;
  const auto fwd = net.forward(x);
  EXPECT_EQ(guided_input_gradient(net, x, up), net.backward(fwd.cache, up, plain).input);
}

TEST(Guided, SignalsNonnegativeAfterGates) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    nn::Network net({nn::LayerSpec::conv2d("c", 1, 3), nn::LayerSpec::leaky_relu(0.2), nn::LayerSpec::flatten(),
                     nn::LayerSpec::dense("d1", 3 * 4 * 3, 6), nn::LayerSpec::relu(), nn::LayerSpec::dense("d2", 6, 1)},
                    {1, 8, 6}, seed);
    Rng rng(seed + 40);
    const Tensor x = oracle::random_tensor({1, 1, 8, 6}, rng);
    std::size_t gates = 0;
    const Tensor g = guided_input_gradient(net, x, Tensor({1, 1}, 1.0), [&](std::size_t layer, const Tensor& signal) {
      const auto kind = net.layers()[layer].kind;
      if (kind != nn::LayerKind::relu && kind != nn::LayerKind::leaky_relu) return;
      ++gates;
      for (double v : signal.values()) EXPECT_GE(v, 0.0) << "layer " << layer;
    });
    EXPECT_EQ(gates, 2u);
    EXPECT_TRUE(g.all_finite());
  }
}

TEST(Guided, ClassifierSaliency) {
  const auto img = fixture::cohort_images(1, 1, 9).front();
  clf::ClassifierModel model(10);
  EXPECT_THROW(guided_backprop(model, img), Error);
  model.mark_trained();
  const auto a = guided_backprop(model, img, Label::healthy);
  EXPECT_EQ(a.grid.rows, kImageRows);
  EXPECT_EQ(a.grid.cols, kImageCols);
  EXPECT_EQ(a.target, Label::healthy);
  for (double v : a.grid.values) EXPECT_TRUE(std::isfinite(v));
  EXPECT_EQ(guided_backprop(model, img, Label::healthy).grid, a.grid);
  EXPECT_EQ(guided_backprop(model, img, Label::acld).target, Label::acld);
}

}  // namespace
}  // namespace n2rpp::saliency
