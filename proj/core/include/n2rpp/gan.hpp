#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "n2rpp/autoencoder.hpp"
#include "n2rpp/nn/adam.hpp"
#include "n2rpp/nn/network.hpp"
#include "n2rpp/types.hpp"

namespace n2rpp::gan {

struct GeneratorShape {
  std::size_t latent = kFeatureDim;
  std::size_t base_rows = 13;
  std::size_t base_cols = 8;
  std::size_t channels1 = 64;
  std::size_t channels2 = 32;
};

struct DiscriminatorShape {
  std::size_t rows = kImageRows;
  std::size_t cols = kImageCols;
  std::size_t channels1 = 32;
  std::size_t channels2 = 64;
};

// dense(latent -> c1*br*bc)+relu, reshape (c1, br, bc), deconv(c1->c2)+relu,
// deconv(c2->1)+sigmoid. Output (1, 4*br, 4*bc).
nn::Network make_generator_network(std::uint64_t seed, GeneratorShape shape = {});
// conv(1->c1)+lrelu, conv(c1->c2)+lrelu, flatten, dense(->1)+sigmoid.
nn::Network make_discriminator_network(std::uint64_t seed, DiscriminatorShape shape = {});

GeneratorShape generator_shape_from(const nn::NetworkParams& params);
DiscriminatorShape discriminator_shape_from(const nn::NetworkParams& params);

struct GeneratorModel {
  nn::Network network;

  GeneratorModel() = default;
  explicit GeneratorModel(nn::Network net) : network(std::move(net)) {}
  static GeneratorModel from_params(nn::NetworkParams params);

  // (N, latent) -> (N, 1, rows, cols)
  Tensor generate(const Tensor& features) const { return network.predict(features); }
};

struct DiscriminatorModel {
  nn::Network network;

  DiscriminatorModel() = default;
  explicit DiscriminatorModel(nn::Network net) : network(std::move(net)) {}
  static DiscriminatorModel from_params(nn::NetworkParams params);

  // (N, 1, rows, cols) -> N probabilities of being real
  std::vector<double> score(const Tensor& images) const;
};

struct GanConfig {
  double alpha = 0.03;
  std::size_t iterations = 20000;
  std::size_t k_d = 1;
  std::size_t batch = 32;
  std::uint64_t seed = 42;
  nn::AdamConfig adam{2e-4, 0.5, 0.999, 1e-8};

  void validate() const;
};

struct GeneratorLoss {
  double value = 0.0;
  Tensor d_fake_grad;   // d l_G / d d_fake, shape of d_fake
  Tensor rebuilt_grad;  // d l_G / d rebuilt, shape of rebuilt
};

// l_G = (1 - alpha) * mean(-ln d_fake) + alpha * MSE(original, rebuilt).
// d_fake is (N, 1); original/rebuilt share any shape.
GeneratorLoss generator_loss(const Tensor& d_fake, const Tensor& original, const Tensor& rebuilt,
                             double alpha);
double generator_loss(double d_fake, const Grid& original, const Grid& rebuilt, double alpha);

struct DiscriminatorLoss {
  double value = 0.0;
  Tensor real_grad;  // d l_D / d d_real
  Tensor fake_grad;  // d l_D / d d_fake
};

// l_D = mean(-ln d_real) + mean(-ln(1 - d_fake)).
DiscriminatorLoss discriminator_loss(const Tensor& d_real, const Tensor& d_fake);
double discriminator_loss(double d_real, double d_fake);

// Standardized encoder features for each image, (N, hidden). Throws with the
// offending case id when a feature vector is constant.
Tensor standardized_features(const ae::AutoencoderModel& ae, const std::vector<PressureImage>& images);

// G(standardize(encode(img))), carrying extrema and metadata from `img`.
PressureImage rebuild(const PressureImage& img, const ae::AutoencoderModel& ae,
                      const GeneratorModel& g);
std::vector<PressureImage> rebuild_all(const std::vector<PressureImage>& images,
                                       const ae::AutoencoderModel& ae, const GeneratorModel& g);

struct GeneratorStep {
  double loss = 0.0;
  nn::NetworkParams grads;
};

// Generator gradients of l_G for one batch, with D held fixed.
GeneratorStep generator_gradients(const GeneratorModel& g, const DiscriminatorModel& d,
                                  const Tensor& features, const Tensor& originals, double alpha);

// Gradients of pure MSE regression of G(features) onto originals.
GeneratorStep mse_regression_gradients(const GeneratorModel& g, const Tensor& features,
                                       const Tensor& originals);

struct GanTraceRow {
  std::size_t iteration = 0;
  double l_g = 0.0;
  double l_d = 0.0;
  double d_accuracy = 0.0;
};

struct GanTrainResult {
  GeneratorModel generator;
  DiscriminatorModel discriminator;
  std::vector<GanTraceRow> trace;
};

struct GanShapes {
  GeneratorShape generator;
  DiscriminatorShape discriminator;
};

// Called after every iteration with the trace row and the current models.
using GanObserver =
    std::function<void(const GanTraceRow&, const GeneratorModel&, const DiscriminatorModel&)>;

// Adversarial training: per iteration k_d discriminator steps (healthy real,
// rebuilt patients fake), then one generator step against a frozen D. The
// autoencoder is read-only.
GanTrainResult train_n2rpp(const std::vector<PressureImage>& patients,
                           const std::vector<PressureImage>& healthy,
                           const ae::AutoencoderModel& ae, const GanConfig& cfg,
                           const GanObserver& on_iteration = {},
                           GanShapes shapes = {});

// Monte-Carlo estimate of the composite objective:
// (1 - alpha)[mean ln D(y) + mean ln(1 - D(G(x)))] + alpha * mean MSE(x, G(x)).
double objective_value(const GeneratorModel& g, const DiscriminatorModel& d,
                       const std::vector<PressureImage>& patients,
                       const std::vector<PressureImage>& healthy, const ae::AutoencoderModel& ae,
                       double alpha);

// Fraction of correct D decisions (threshold 0.5) over real and fake images.
double discriminator_accuracy(const DiscriminatorModel& d, const Tensor& real, const Tensor& fake);

}  // namespace n2rpp::gan
