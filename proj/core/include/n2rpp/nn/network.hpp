#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "n2rpp/nn/layers.hpp"
#include "n2rpp/nn/params.hpp"
#include "n2rpp/tensor.hpp"

namespace n2rpp::nn {

// Activations recorded by Network::forward. activations[i] is the input of
// layer i; activations.back() is the network output.
struct ForwardCache {
  std::uint64_t revision = 0;
  std::vector<Tensor> activations;
};

struct ForwardResult {
  Tensor output;
  ForwardCache cache;
};

struct BackwardOptions {
  bool param_grads = true;
  // Guided backpropagation: at relu/leaky_relu the backward signal is also
  // zeroed wherever the incoming (upstream) signal is negative.
  bool guided = false;
  // Called with the gradient w.r.t. the input of each layer, last layer first.
  std::function<void(std::size_t layer, const Tensor& grad)> observer;
};

struct Gradients {
  NetworkParams params;  // empty when param_grads == false
  Tensor input;
};

// Sequential network: a layer list plus its parameters. Inputs carry a
// leading batch dimension in front of the per-sample `input_shape`.
class Network {
 public:
  Network() = default;
  // Xavier-uniform weights, zero biases.
  Network(std::vector<LayerSpec> layers, Shape input_shape, std::uint64_t seed);
  Network(std::vector<LayerSpec> layers, Shape input_shape, NetworkParams params);

  const std::vector<LayerSpec>& layers() const { return layers_; }
  const Shape& input_shape() const { return input_shape_; }
  const Shape& output_shape() const { return shapes_.back(); }
  // Per-sample input shape of layer i (i == layers().size() gives the output).
  const Shape& shape_at(std::size_t i) const { return shapes_.at(i); }

  const NetworkParams& params() const { return params_; }
  // Any access through this reference invalidates earlier caches.
  NetworkParams& mutable_params();
  // Replaces all parameters; layout must match.
  void set_params(NetworkParams params);

  ForwardResult forward(const Tensor& input) const;
  Tensor predict(const Tensor& input) const;
  Gradients backward(const ForwardCache& cache, const Tensor& upstream,
                     const BackwardOptions& options = {}) const;

  // Layers [first, last) as a standalone network with copied parameters.
  Network slice(std::size_t first, std::size_t last) const;
  Network prefix(std::size_t n_layers) const { return slice(0, n_layers); }

  std::uint64_t revision() const { return revision_; }

 private:
  void build_shapes();
  void validate_params() const;

  std::vector<LayerSpec> layers_;
  Shape input_shape_;
  std::vector<Shape> shapes_;
  NetworkParams params_;
  std::vector<std::size_t> weight_index_;  // per layer, into params_
  std::uint64_t revision_ = 0;
};

}  // namespace n2rpp::nn
