#include "n2rpp/saliency.hpp"

#include "n2rpp/error.hpp"
#include "n2rpp/preprocess.hpp"

namespace n2rpp::saliency {

DiffHeatmap diff_heatmap(const PressureImage& original, const PressureImage& rebuilt) {
  if (original.grid.rows != rebuilt.grid.rows || original.grid.cols != rebuilt.grid.cols ||
      original.grid.size() != rebuilt.grid.size()) {
    throw ShapeError("diff_heatmap: images differ in shape");
  }
  DiffHeatmap d{rebuilt.grid, preprocess::denormalize(rebuilt)};
  const Grid orig_abs = preprocess::denormalize(original);
  for (std::size_t i = 0; i < d.grid.size(); ++i) {
    d.grid.values[i] -= original.grid.values[i];
    d.absolute.values[i] -= orig_abs.values[i];
  }
  return d;
}

Tensor guided_input_gradient(const nn::Network& net, const Tensor& input, const Tensor& upstream,
                             const std::function<void(std::size_t, const Tensor&)>& observer) {
  const auto fwd = net.forward(input);
  nn::BackwardOptions opts;
  opts.param_grads = false;
  opts.guided = true;
  opts.observer = observer;
  return net.backward(fwd.cache, upstream, opts).input;
}

SaliencyMap guided_backprop(const clf::ClassifierModel& model, const PressureImage& img,
                            Label target) {
  if (!model.trained()) throw Error("classifier has not been trained");
  const nn::Network& full = model.network();
  const bool ends_in_sigmoid = full.layers().back().kind == nn::LayerKind::sigmoid;
  const nn::Network logit = ends_in_sigmoid ? full.prefix(full.layers().size() - 1) : full;

  const Tensor x({1, 1, img.grid.rows, img.grid.cols}, img.grid.values);
  const Tensor seed({1, 1}, target == Label::healthy ? 1.0 : -1.0);
  const Tensor g = guided_input_gradient(logit, x, seed);

  SaliencyMap map{Grid(img.grid.rows, img.grid.cols), target};
  std::copy(g.values().begin(), g.values().end(), map.grid.values.begin());
  return map;
}

RegionStats region_stats(const Grid& grid) {
  RegionStats s;
  std::array<double, 4> sum{};
  for (std::size_t r = 0; r < grid.rows; ++r) {
    const auto band = static_cast<std::size_t>(region_of_row(r, grid.rows));
    for (std::size_t c = 0; c < grid.cols; ++c) sum[band] += grid(r, c);
    s.cells[band] += grid.cols;
  }
  for (std::size_t b = 0; b < 4; ++b) {
    s.mean[b] = s.cells[b] ? sum[b] / static_cast<double>(s.cells[b]) : 0.0;
  }
  return s;
}

}  // namespace n2rpp::saliency
