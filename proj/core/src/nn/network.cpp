#include "n2rpp/nn/network.hpp"

#include <atomic>
#include <cmath>
#include <limits>

#include "n2rpp/error.hpp"
#include "n2rpp/nn/kernels.hpp"
#include "n2rpp/random.hpp"

namespace n2rpp::nn {
namespace {

constexpr std::size_t kNoParams = std::numeric_limits<std::size_t>::max();

std::uint64_t next_revision() {
  static std::atomic<std::uint64_t> counter{0};
  return ++counter;
}

kernels::ConvGeometry geometry(const LayerSpec& l) { return {l.kernel, l.stride, l.padding}; }

Shape with_batch(std::size_t n, const Shape& per_sample) {
  Shape s{n};
  s.insert(s.end(), per_sample.begin(), per_sample.end());
  return s;
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

std::pair<std::size_t, std::size_t> fans(const LayerSpec& l) {
  const std::size_t area = l.kind == LayerKind::dense ? 1 : l.kernel * l.kernel;
  return {l.in * area, l.out * area};
}

}  // namespace

Network::Network(std::vector<LayerSpec> layers, Shape input_shape, std::uint64_t seed)
    : layers_(std::move(layers)), input_shape_(std::move(input_shape)) {
  build_shapes();
  Rng rng(seed);
  for (const auto& l : layers_) {
    if (!l.has_params()) continue;
    const auto [fan_in, fan_out] = fans(l);
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    Tensor w(weight_shape(l));
    for (double& v : w.values()) v = rng.uniform(-limit, limit);
    params_.add(l.name + ".weight", std::move(w));
    params_.add(l.name + ".bias", Tensor(bias_shape(l)));
  }
  validate_params();
  revision_ = next_revision();
}

Network::Network(std::vector<LayerSpec> layers, Shape input_shape, NetworkParams params)
    : layers_(std::move(layers)), input_shape_(std::move(input_shape)), params_(std::move(params)) {
  build_shapes();
  validate_params();
  revision_ = next_revision();
}

void Network::build_shapes() {
  if (layers_.empty()) throw Error("network has no layers");
  shapes_.clear();
  shapes_.push_back(input_shape_);
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    shapes_.push_back(infer_output_shape(layers_[i], shapes_.back(), i));
  }
}

void Network::validate_params() const {
  std::size_t expected = 0;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto& l = layers_[i];
    if (!l.has_params()) continue;
    if (l.name.empty()) throw Error("layer " + std::to_string(i) + " has parameters but no name");
    const std::size_t wi = params_.index_of(l.name + ".weight");
    const std::size_t bi = params_.index_of(l.name + ".bias");
    if (params_[wi].tensor.shape() != weight_shape(l) ||
        params_[bi].tensor.shape() != bias_shape(l)) {
      throw ShapeError(i, "parameter shapes do not match layer '" + l.name + "'");
    }
    if (wi != expected || bi != wi + 1) {
      throw Error("parameters of '" + l.name + "' are out of layer order");
    }
    expected += 2;
  }
  if (expected != params_.size()) throw Error("network has unexpected extra parameters");
}

NetworkParams& Network::mutable_params() {
  revision_ = next_revision();
  return params_;
}

void Network::set_params(NetworkParams params) {
  if (!params.same_layout(params_)) throw Error("set_params: parameter layout mismatch");
  params_ = std::move(params);
  revision_ = next_revision();
}

ForwardResult Network::forward(const Tensor& input) const {
  if (input.rank() != input_shape_.size() + 1 ||
      !std::equal(input_shape_.begin(), input_shape_.end(), input.shape().begin() + 1)) {
    throw ShapeError(0, "expected input " + shape_to_string(with_batch(0, input_shape_)) +
                            " with any batch, got " + shape_to_string(input.shape()));
  }
  const std::size_t n = input.dim(0);
  ForwardResult result;
  result.cache.revision = revision_;
  auto& acts = result.cache.activations;
  acts.reserve(layers_.size() + 1);
  acts.push_back(input);
  std::size_t p = 0;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto& l = layers_[i];
    const Tensor& x = acts.back();
    Tensor y;
    switch (l.kind) {
      case LayerKind::dense:
        y = kernels::dense_forward(x, params_[p].tensor, params_[p + 1].tensor);
        break;
      case LayerKind::conv2d:
        y = kernels::conv2d_forward(x, params_[p].tensor, params_[p + 1].tensor, geometry(l));
        break;
      case LayerKind::deconv2d:
        y = kernels::deconv2d_forward(x, params_[p].tensor, params_[p + 1].tensor, geometry(l));
        break;
      case LayerKind::relu:
        y = x;
        for (double& v : y.values()) v = v > 0.0 ? v : 0.0;
        break;
      case LayerKind::leaky_relu:
        y = x;
        for (double& v : y.values()) v = v > 0.0 ? v : l.slope * v;
        break;
      case LayerKind::sigmoid:
        y = x;
        for (double& v : y.values()) v = sigmoid(v);
        break;
      case LayerKind::flatten:
        y = x.reshaped(with_batch(n, shapes_[i + 1]));
        break;
    }
    if (l.has_params()) p += 2;
    acts.push_back(std::move(y));
  }
  result.output = acts.back();
  return result;
}

Tensor Network::predict(const Tensor& input) const { return forward(input).output; }

Gradients Network::backward(const ForwardCache& cache, const Tensor& upstream,
                            const BackwardOptions& options) const {
  if (cache.revision != revision_ || cache.activations.size() != layers_.size() + 1) {
    throw Error("backward: cache does not belong to this network state");
  }
  if (upstream.shape() != cache.activations.back().shape()) {
    throw ShapeError(layers_.size() - 1, "upstream gradient " + shape_to_string(upstream.shape()) +
                                             " does not match output " +
                                             shape_to_string(cache.activations.back().shape()));
  }
  Gradients grads;
  if (options.param_grads) grads.params = params_.zeros_like();

  std::size_t p = params_.size();
  Tensor g = upstream;
  for (std::size_t i = layers_.size(); i-- > 0;) {
    const auto& l = layers_[i];
    const Tensor& x = cache.activations[i];
    const Tensor& y = cache.activations[i + 1];
    Tensor dx;
    if (l.has_params()) p -= 2;
    Tensor* dw = options.param_grads && l.has_params() ? &grads.params[p].tensor : nullptr;
    Tensor* db = options.param_grads && l.has_params() ? &grads.params[p + 1].tensor : nullptr;
    switch (l.kind) {
      case LayerKind::dense:
        kernels::dense_backward(x, params_[p].tensor, g, dw, db, &dx);
        break;
      case LayerKind::conv2d:
        kernels::conv2d_backward(x, params_[p].tensor, g, geometry(l), dw, db, &dx);
        break;
      case LayerKind::deconv2d:
        kernels::deconv2d_backward(x, params_[p].tensor, g, geometry(l), dw, db, &dx);
        break;
      case LayerKind::relu:
      case LayerKind::leaky_relu: {
        const double neg = l.kind == LayerKind::relu ? 0.0 : l.slope;
        dx = g;
        for (std::size_t k = 0; k < dx.size(); ++k) {
          double v = g[k] * (x[k] > 0.0 ? 1.0 : neg);
          if (options.guided && g[k] < 0.0) v = 0.0;
          dx[k] = v;
        }
        break;
      }
      case LayerKind::sigmoid:
        dx = g;
        for (std::size_t k = 0; k < dx.size(); ++k) dx[k] = g[k] * y[k] * (1.0 - y[k]);
        break;
      case LayerKind::flatten:
        dx = g.reshaped(x.shape());
        break;
    }
    g = std::move(dx);
    if (options.observer) options.observer(i, g);
  }
  grads.input = std::move(g);
  return grads;
}

Network Network::slice(std::size_t first, std::size_t last) const {
  if (first >= last || last > layers_.size()) throw Error("slice: bad layer range");
  std::vector<LayerSpec> part(layers_.begin() + static_cast<std::ptrdiff_t>(first),
                              layers_.begin() + static_cast<std::ptrdiff_t>(last));
  NetworkParams params;
  for (const auto& l : part) {
    if (!l.has_params()) continue;
    params.add(l.name + ".weight", params_.at(l.name + ".weight"));
    params.add(l.name + ".bias", params_.at(l.name + ".bias"));
  }
  return Network(std::move(part), shapes_[first], std::move(params));
}

}  // namespace n2rpp::nn
