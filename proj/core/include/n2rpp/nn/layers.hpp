#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "n2rpp/tensor.hpp"

namespace n2rpp::nn {

enum class LayerKind { dense, conv2d, deconv2d, relu, leaky_relu, sigmoid, flatten };

std::string_view to_string(LayerKind kind);

// Static description of one layer. Parametric layers (dense, conv2d,
// deconv2d) own a "<name>.weight" and "<name>.bias" entry in NetworkParams.
//
// Weight layouts:
//   dense    (in, out)
//   conv2d   (out_channels, in_channels, k, k)
//   deconv2d (in_channels, out_channels, k, k)
struct LayerSpec {
  LayerKind kind = LayerKind::relu;
  std::string name;
  std::size_t in = 0;   // units or channels
  std::size_t out = 0;  // units or channels
  std::size_t kernel = 4;
  std::size_t stride = 2;
  std::size_t padding = 1;
  double slope = 0.2;
  // flatten: per-sample target shape; empty means flatten to one dimension.
  Shape target;

  bool has_params() const {
    return kind == LayerKind::dense || kind == LayerKind::conv2d || kind == LayerKind::deconv2d;
  }

  static LayerSpec dense(std::string name, std::size_t in, std::size_t out);
  static LayerSpec conv2d(std::string name, std::size_t in, std::size_t out, std::size_t kernel = 4,
                          std::size_t stride = 2, std::size_t padding = 1);
  static LayerSpec deconv2d(std::string name, std::size_t in, std::size_t out,
                            std::size_t kernel = 4, std::size_t stride = 2,
                            std::size_t padding = 1);
  static LayerSpec relu();
  static LayerSpec leaky_relu(double slope = 0.2);
  static LayerSpec sigmoid();
  static LayerSpec flatten(Shape target = {});
};

// Per-sample output shape of a layer, given its per-sample input shape.
// Throws ShapeError tagged with `index` on mismatch.
Shape infer_output_shape(const LayerSpec& layer, const Shape& input, std::size_t index);

Shape weight_shape(const LayerSpec& layer);
Shape bias_shape(const LayerSpec& layer);

}  // namespace n2rpp::nn
