#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "n2rpp/nn/adam.hpp"
#include "n2rpp/nn/network.hpp"
#include "n2rpp/types.hpp"

namespace n2rpp::ae {

struct AutoencoderShape {
  std::size_t input = kImagePixels;
  std::size_t hidden = kFeatureDim;
};

inline constexpr double kDecoderBiasInit = 0.3;

// dense(input->hidden)+relu, dense(hidden->input)+relu; parameters
// enc.weight, enc.bias, dec.weight, dec.bias.
nn::Network make_autoencoder_network(std::uint64_t seed, AutoencoderShape shape = {});

// Symmetric one-hidden-layer autoencoder used as a frozen feature extractor.
class AutoencoderModel {
 public:
  // Freshly initialized and not yet usable for encode/decode.
  explicit AutoencoderModel(std::uint64_t seed, AutoencoderShape shape = {});
  // Trained model from stored parameters.
  explicit AutoencoderModel(nn::NetworkParams params);

  const nn::Network& network() const { return net_; }
  nn::Network& mutable_network() { return net_; }
  bool trained() const { return trained_; }
  void mark_trained() { trained_ = true; }
  std::size_t input_dim() const { return net_.input_shape()[0]; }
  std::size_t feature_dim() const { return net_.shape_at(2)[0]; }

  // (N, input) -> (N, hidden), post-ReLU.
  Tensor encode_batch(const Tensor& flat_images) const;
  FeatureVector encode(const PressureImage& img) const;
  Grid decode(const FeatureVector& v) const;
  Grid reconstruct(const PressureImage& img) const { return decode(encode(img)); }

 private:
  void require_trained() const;

  nn::Network net_;
  bool trained_ = false;
};

struct AeTrainConfig {
  std::size_t epochs = 500;
  std::size_t batch = 32;
  double lr = 1e-3;
  std::uint64_t seed = 42;
};

struct AeTrainResult {
  AutoencoderModel model;
  std::vector<double> loss_history;  // per-epoch mean reconstruction MSE
};

AeTrainResult train_autoencoder(const std::vector<PressureImage>& dataset, const AeTrainConfig& cfg,
                                const std::function<void(std::size_t, double)>& on_epoch = {});

// Mean pixel MSE between each image and its reconstruction.
double reconstruction_mse(const AutoencoderModel& model, const std::vector<PressureImage>& images);

}  // namespace n2rpp::ae
