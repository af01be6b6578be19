#pragma once

#include <array>
#include <functional>

#include "n2rpp/classifier.hpp"
#include "n2rpp/nn/network.hpp"
#include "n2rpp/regions.hpp"
#include "n2rpp/types.hpp"

namespace n2rpp::saliency {

// rebuilt - original. `absolute` is the same difference in sensor units, each
// image restored with its own extrema before subtracting.
struct DiffHeatmap {
  Grid grid;
  Grid absolute;
};

struct SaliencyMap {
  Grid grid;
  Label target = Label::healthy;
};

DiffHeatmap diff_heatmap(const PressureImage& original, const PressureImage& rebuilt);

// Guided-backprop input gradient of `net` for a single-sample input, seeded
// with `upstream` on the output. `observer` sees the signal after every layer.
Tensor guided_input_gradient(const nn::Network& net, const Tensor& input, const Tensor& upstream,
                             const std::function<void(std::size_t, const Tensor&)>& observer = {});

// Saliency of the classifier logit (the sigmoid is stripped). Target acld
// takes the gradient of the negated logit.
SaliencyMap guided_backprop(const clf::ClassifierModel& model, const PressureImage& img,
                            Label target = Label::healthy);

struct RegionStats {
  std::array<double, 4> mean{};  // indexed by FootRegion
  std::array<std::size_t, 4> cells{};

  double operator[](FootRegion r) const { return mean[static_cast<std::size_t>(r)]; }
};

RegionStats region_stats(const Grid& grid);
inline RegionStats region_stats(const DiffHeatmap& diff) { return region_stats(diff.grid); }

}  // namespace n2rpp::saliency
