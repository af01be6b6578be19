#include "n2rpp/autoencoder.hpp"

#include <cmath>
#include <numeric>

#include "n2rpp/batch.hpp"
#include "n2rpp/error.hpp"
#include "n2rpp/nn/loss.hpp"
#include "n2rpp/random.hpp"

namespace n2rpp::ae {
namespace {

using nn::LayerSpec;

std::vector<LayerSpec> ae_layers(AutoencoderShape shape) {
  return {LayerSpec::dense("enc", shape.input, shape.hidden), LayerSpec::relu(),
          LayerSpec::dense("dec", shape.hidden, shape.input), LayerSpec::relu()};
}

AutoencoderShape shape_from(const nn::NetworkParams& params) {
  const Shape& w = params.at("enc.weight").shape();
  if (w.size() != 2) throw ShapeError("enc.weight must be rank 2");
  return {w[0], w[1]};
}

}  // namespace

nn::Network make_autoencoder_network(std::uint64_t seed, AutoencoderShape shape) {
  nn::Network net(ae_layers(shape), {shape.input}, seed);
  // A zero decoder bias leaves about half the output units dead from the first
  // step; a small positive bias keeps them trainable.
  net.mutable_params().at("dec.bias").fill(kDecoderBiasInit);
  return net;
}

AutoencoderModel::AutoencoderModel(std::uint64_t seed, AutoencoderShape shape)
    : net_(make_autoencoder_network(seed, shape)) {}

AutoencoderModel::AutoencoderModel(nn::NetworkParams params) : trained_(true) {
  const AutoencoderShape shape = shape_from(params);
  net_ = nn::Network(ae_layers(shape), {shape.input}, std::move(params));
}

void AutoencoderModel::require_trained() const {
  if (!trained_) throw Error("autoencoder has not been trained");
}

Tensor AutoencoderModel::encode_batch(const Tensor& flat_images) const {
  require_trained();
  return net_.prefix(2).predict(flat_images);
}

FeatureVector AutoencoderModel::encode(const PressureImage& img) const {
  require_trained();
  if (img.grid.size() != input_dim()) {
    throw ShapeError("encode: image has " + std::to_string(img.grid.size()) + " pixels, expected " +
                     std::to_string(input_dim()));
  }
  const Tensor h = encode_batch(Tensor({1, input_dim()}, img.grid.values));
  return {std::vector<double>(h.values().begin(), h.values().end()), false};
}

Grid AutoencoderModel::decode(const FeatureVector& v) const {
  require_trained();
  if (v.values.size() != feature_dim()) {
    throw ShapeError("decode: expected " + std::to_string(feature_dim()) + " features, got " +
                     std::to_string(v.values.size()));
  }
  const Tensor y = net_.slice(2, 4).predict(Tensor({1, feature_dim()}, v.values));
  Grid g = y.size() == kImagePixels ? Grid(kImageRows, kImageCols) : Grid(1, y.size());
  std::copy(y.values().begin(), y.values().end(), g.values.begin());
  return g;
}

AeTrainResult train_autoencoder(const std::vector<PressureImage>& dataset, const AeTrainConfig& cfg,
                                const std::function<void(std::size_t, double)>& on_epoch) {
  if (dataset.empty()) throw Error("train_autoencoder: empty dataset");
  if (cfg.batch == 0 || cfg.epochs == 0) throw Error("train_autoencoder: epochs and batch must be >= 1");
  const AutoencoderShape shape{dataset.front().grid.size(), kFeatureDim};

  AeTrainResult result{AutoencoderModel(derive_seed(cfg.seed, 0), shape), {}};
  nn::Network& net = result.model.mutable_network();
  nn::AdamState adam(net.params(), {cfg.lr, 0.9, 0.999, 1e-8});
  Rng rng(derive_seed(cfg.seed, 1));

  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(order.begin(), order.end());
    double total = 0.0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch) {
      const std::size_t stop = std::min(order.size(), start + cfg.batch);
      const std::span<const std::size_t> idx(order.data() + start, stop - start);
      const Tensor x = gather_batch(dataset, idx, BatchLayout::flat);
      const auto fwd = net.forward(x);
      const auto loss = nn::mse_loss(fwd.output, x);
      if (!std::isfinite(loss.value)) {
        throw NumericError("train_autoencoder: non-finite loss at epoch " + std::to_string(epoch));
      }
      const auto grads = net.backward(fwd.cache, loss.grad);
      nn::adam_update(net.mutable_params(), grads.params, adam);
      total += loss.value * static_cast<double>(idx.size());
    }
    const double mean = total / static_cast<double>(order.size());
    result.loss_history.push_back(mean);
    if (on_epoch) on_epoch(epoch, mean);
  }
  result.model.mark_trained();
  return result;
}

double reconstruction_mse(const AutoencoderModel& model, const std::vector<PressureImage>& images) {
  if (images.empty()) throw Error("reconstruction_mse: no images");
  const Tensor x = to_batch(images, BatchLayout::flat);
  if (!model.trained()) throw Error("autoencoder has not been trained");
  return nn::mse_loss(model.network().predict(x), x).value;
}

}  // namespace n2rpp::ae
