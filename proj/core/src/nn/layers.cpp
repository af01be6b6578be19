#include "n2rpp/nn/layers.hpp"

#include "n2rpp/error.hpp"
#include "n2rpp/nn/kernels.hpp"

namespace n2rpp::nn {

std::string_view to_string(LayerKind kind) {
  switch (kind) {
    case LayerKind::dense: return "dense";
    case LayerKind::conv2d: return "conv2d";
    case LayerKind::deconv2d: return "deconv2d";
    case LayerKind::relu: return "relu";
    case LayerKind::leaky_relu: return "leaky_relu";
    case LayerKind::sigmoid: return "sigmoid";
    case LayerKind::flatten: return "flatten";
  }
  return "?";
}

LayerSpec LayerSpec::dense(std::string name, std::size_t in, std::size_t out) {
  LayerSpec l;
  l.kind = LayerKind::dense;
  l.name = std::move(name);
  l.in = in;
  l.out = out;
  return l;
}

LayerSpec LayerSpec::conv2d(std::string name, std::size_t in, std::size_t out, std::size_t kernel,
                            std::size_t stride, std::size_t padding) {
  LayerSpec l;
  l.kind = LayerKind::conv2d;
  l.name = std::move(name);
  l.in = in;
  l.out = out;
  l.kernel = kernel;
  l.stride = stride;
  l.padding = padding;
  return l;
}

LayerSpec LayerSpec::deconv2d(std::string name, std::size_t in, std::size_t out,
                              std::size_t kernel, std::size_t stride, std::size_t padding) {
  LayerSpec l = conv2d(std::move(name), in, out, kernel, stride, padding);
  l.kind = LayerKind::deconv2d;
  return l;
}

LayerSpec LayerSpec::relu() { return LayerSpec{}; }

LayerSpec LayerSpec::leaky_relu(double slope) {
  LayerSpec l;
  l.kind = LayerKind::leaky_relu;
  l.slope = slope;
  return l;
}

LayerSpec LayerSpec::sigmoid() {
  LayerSpec l;
  l.kind = LayerKind::sigmoid;
  return l;
}

LayerSpec LayerSpec::flatten(Shape target) {
  LayerSpec l;
  l.kind = LayerKind::flatten;
  l.target = std::move(target);
  return l;
}

Shape infer_output_shape(const LayerSpec& layer, const Shape& input, std::size_t index) {
  const auto fail = [&](const std::string& msg) -> Shape {
    throw ShapeError(index, std::string(to_string(layer.kind)) + " " + msg + ", got input " +
                                shape_to_string(input));
  };
  switch (layer.kind) {
    case LayerKind::dense:
      if (input.size() != 1 || input[0] != layer.in) {
        return fail("expects (" + std::to_string(layer.in) + ")");
      }
      return {layer.out};
    case LayerKind::conv2d:
    case LayerKind::deconv2d: {
      if (input.size() != 3 || input[0] != layer.in) {
        return fail("expects (" + std::to_string(layer.in) + ", H, W)");
      }
      if (layer.kernel == 0 || layer.stride == 0) return fail("has zero kernel or stride");
      const kernels::ConvGeometry g{layer.kernel, layer.stride, layer.padding};
      if (layer.kind == LayerKind::conv2d) {
        if (input[1] + 2 * layer.padding < layer.kernel ||
            input[2] + 2 * layer.padding < layer.kernel) {
          return fail("kernel larger than padded input");
        }
        return {layer.out, kernels::conv_out_extent(input[1], g),
                kernels::conv_out_extent(input[2], g)};
      }
      if ((input[1] - 1) * layer.stride + layer.kernel <= 2 * layer.padding) {
        return fail("produces an empty output");
      }
      return {layer.out, kernels::deconv_out_extent(input[1], g),
              kernels::deconv_out_extent(input[2], g)};
    }
    case LayerKind::relu:
    case LayerKind::leaky_relu:
    case LayerKind::sigmoid:
      return input;
    case LayerKind::flatten: {
      const Shape target = layer.target.empty() ? Shape{shape_size(input)} : layer.target;
      if (shape_size(target) != shape_size(input)) {
        return fail("cannot reshape to " + shape_to_string(target));
      }
      return target;
    }
  }
  return fail("unknown layer kind");
}

Shape weight_shape(const LayerSpec& layer) {
  switch (layer.kind) {
    case LayerKind::dense: return {layer.in, layer.out};
    case LayerKind::conv2d: return {layer.out, layer.in, layer.kernel, layer.kernel};
    case LayerKind::deconv2d: return {layer.in, layer.out, layer.kernel, layer.kernel};
    default: return {};
  }
}

Shape bias_shape(const LayerSpec& layer) {
  if (!layer.has_params()) return {};
  return {layer.out};
}

}  // namespace n2rpp::nn
