#include "n2rpp/gan.hpp"

#include <cmath>

#include "n2rpp/batch.hpp"
#include "n2rpp/error.hpp"
#include "n2rpp/nn/loss.hpp"
#include "n2rpp/preprocess.hpp"
#include "n2rpp/random.hpp"

namespace n2rpp::gan {
namespace {

using nn::LayerSpec;

std::vector<LayerSpec> generator_layers(const GeneratorShape& s) {
  return {LayerSpec::dense("fc", s.latent, s.channels1 * s.base_rows * s.base_cols),
          LayerSpec::relu(),
          LayerSpec::flatten({s.channels1, s.base_rows, s.base_cols}),
          LayerSpec::deconv2d("deconv1", s.channels1, s.channels2),
          LayerSpec::relu(),
          LayerSpec::deconv2d("deconv2", s.channels2, 1),
          LayerSpec::sigmoid()};
}

std::vector<LayerSpec> discriminator_layers(const DiscriminatorShape& s) {
  const std::size_t flat = s.channels2 * (s.rows / 4) * (s.cols / 4);
  return {LayerSpec::conv2d("conv1", 1, s.channels1),
          LayerSpec::leaky_relu(0.2),
          LayerSpec::conv2d("conv2", s.channels1, s.channels2),
          LayerSpec::leaky_relu(0.2),
          LayerSpec::flatten(),
          LayerSpec::dense("fc", flat, 1),
          LayerSpec::sigmoid()};
}

void add_into(nn::NetworkParams& acc, const nn::NetworkParams& g) {
  for (std::size_t i = 0; i < acc.size(); ++i) {
    for (std::size_t k = 0; k < acc[i].tensor.size(); ++k) acc[i].tensor[k] += g[i].tensor[k];
  }
}

void require_finite(double v, std::size_t iteration, const char* what) {
  if (!std::isfinite(v)) {
    throw NumericError("train_n2rpp: non-finite " + std::string(what) + " at iteration " +
                       std::to_string(iteration));
  }
}

std::vector<std::size_t> draw(Rng& rng, std::size_t n, std::size_t count) {
  std::vector<std::size_t> idx(count);
  for (auto& i : idx) i = rng.index(n);
  return idx;
}

}  // namespace

nn::Network make_generator_network(std::uint64_t seed, GeneratorShape shape) {
  return nn::Network(generator_layers(shape), {shape.latent}, seed);
}

nn::Network make_discriminator_network(std::uint64_t seed, DiscriminatorShape shape) {
  if (shape.rows % 4 || shape.cols % 4) throw ShapeError("discriminator input must be divisible by 4");
  return nn::Network(discriminator_layers(shape), {1, shape.rows, shape.cols}, seed);
}

GeneratorShape generator_shape_from(const nn::NetworkParams& params) {
  const Shape& fc = params.at("fc.weight").shape();
  const Shape& d1 = params.at("deconv1.weight").shape();
  if (fc.size() != 2 || d1.size() != 4) throw ShapeError("generator parameters have unexpected rank");
  GeneratorShape s;
  s.latent = fc[0];
  s.channels1 = d1[0];
  s.channels2 = d1[1];
  if (s.channels1 * s.base_rows * s.base_cols != fc[1]) {
    throw ShapeError("generator fc.weight does not map onto a 13x8 base grid");
  }
  return s;
}

DiscriminatorShape discriminator_shape_from(const nn::NetworkParams& params) {
  const Shape& c1 = params.at("conv1.weight").shape();
  const Shape& c2 = params.at("conv2.weight").shape();
  if (c1.size() != 4 || c2.size() != 4) throw ShapeError("discriminator parameters have unexpected rank");
  DiscriminatorShape s;
  s.channels1 = c1[0];
  s.channels2 = c2[0];
  return s;
}

GeneratorModel GeneratorModel::from_params(nn::NetworkParams params) {
  const GeneratorShape s = generator_shape_from(params);
  return GeneratorModel(nn::Network(generator_layers(s), {s.latent}, std::move(params)));
}

DiscriminatorModel DiscriminatorModel::from_params(nn::NetworkParams params) {
  const DiscriminatorShape s = discriminator_shape_from(params);
  return DiscriminatorModel(
      nn::Network(discriminator_layers(s), {1, s.rows, s.cols}, std::move(params)));
}

std::vector<double> DiscriminatorModel::score(const Tensor& images) const {
  const Tensor out = network.predict(images);
  return {out.values().begin(), out.values().end()};
}

void GanConfig::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error("alpha must lie in [0, 1]");
  if (iterations < 1) throw Error("iterations must be >= 1");
  if (k_d < 1) throw Error("k_d must be >= 1");
  if (batch < 1) throw Error("batch must be >= 1");
}

GeneratorLoss generator_loss(const Tensor& d_fake, const Tensor& original, const Tensor& rebuilt,
                             double alpha) {
  if (d_fake.empty()) throw ShapeError("generator_loss: empty batch");
  const auto mse = nn::mse_loss(rebuilt, original);
  GeneratorLoss out;
  out.d_fake_grad = Tensor(d_fake.shape());
  const double n = static_cast<double>(d_fake.size());
  double adv = 0.0;
  for (std::size_t i = 0; i < d_fake.size(); ++i) {
    const auto l = nn::bce_loss(d_fake[i], 1);
    adv += l.value;
    out.d_fake_grad[i] = (1.0 - alpha) * l.grad / n;
  }
  out.value = (1.0 - alpha) * (adv / n) + alpha * mse.value;
  out.rebuilt_grad = mse.grad;
  for (double& g : out.rebuilt_grad.values()) g *= alpha;
  return out;
}

double generator_loss(double d_fake, const Grid& original, const Grid& rebuilt, double alpha) {
  if (original.values.size() != rebuilt.values.size()) throw ShapeError("generator_loss: grid mismatch");
  const Shape s{original.values.size()};
  return generator_loss(Tensor({1, 1}, {d_fake}), Tensor(s, original.values),
                        Tensor(s, rebuilt.values), alpha)
      .value;
}

DiscriminatorLoss discriminator_loss(const Tensor& d_real, const Tensor& d_fake) {
  if (d_real.empty() || d_fake.empty()) throw ShapeError("discriminator_loss: empty batch");
  DiscriminatorLoss out{0.0, Tensor(d_real.shape()), Tensor(d_fake.shape())};
  const double nr = static_cast<double>(d_real.size());
  const double nf = static_cast<double>(d_fake.size());
  double real = 0.0, fake = 0.0;
  for (std::size_t i = 0; i < d_real.size(); ++i) {
    const auto l = nn::bce_loss(d_real[i], 1);
    real += l.value;
    out.real_grad[i] = l.grad / nr;
  }
  for (std::size_t i = 0; i < d_fake.size(); ++i) {
    const auto l = nn::bce_loss(d_fake[i], 0);
    fake += l.value;
    out.fake_grad[i] = l.grad / nf;
  }
  out.value = real / nr + fake / nf;
  return out;
}

double discriminator_loss(double d_real, double d_fake) {
  return discriminator_loss(Tensor({1, 1}, {d_real}), Tensor({1, 1}, {d_fake})).value;
}

Tensor standardized_features(const ae::AutoencoderModel& ae, const std::vector<PressureImage>& images) {
  if (images.empty()) throw Error("standardized_features: no images");
  const Tensor raw = ae.encode_batch(to_batch(images, BatchLayout::flat));
  const std::size_t dim = raw.dim(1);
  Tensor out(raw.shape());
  for (std::size_t n = 0; n < images.size(); ++n) {
    FeatureVector v{std::vector<double>(raw.data() + n * dim, raw.data() + (n + 1) * dim), false};
    FeatureVector z;
    try {
      z = preprocess::standardize_features(v);
    } catch (const NumericError& e) {
      throw NumericError("case '" + images[n].case_id + "' (" + std::string(to_string(images[n].side)) +
                         "): " + e.what());
    }
    std::copy(z.values.begin(), z.values.end(), out.data() + n * dim);
  }
  return out;
}

PressureImage rebuild(const PressureImage& img, const ae::AutoencoderModel& ae,
                      const GeneratorModel& g) {
  return rebuild_all({img}, ae, g).front();
}

std::vector<PressureImage> rebuild_all(const std::vector<PressureImage>& images,
                                       const ae::AutoencoderModel& ae, const GeneratorModel& g) {
  const Tensor out = g.generate(standardized_features(ae, images));
  std::vector<PressureImage> rebuilt;
  rebuilt.reserve(images.size());
  for (std::size_t n = 0; n < images.size(); ++n) {
    PressureImage r = images[n];
    r.grid = sample_grid(out, n, out.dim(2), out.dim(3));
    rebuilt.push_back(std::move(r));
  }
  return rebuilt;
}

GeneratorStep generator_gradients(const GeneratorModel& g, const DiscriminatorModel& d,
                                  const Tensor& features, const Tensor& originals, double alpha) {
  const auto fake = g.network.forward(features);
  const auto judged = d.network.forward(fake.output);
  const auto loss = generator_loss(judged.output, originals, fake.output, alpha);
  nn::BackwardOptions through_d;
  through_d.param_grads = false;
  Tensor upstream = d.network.backward(judged.cache, loss.d_fake_grad, through_d).input;
  for (std::size_t i = 0; i < upstream.size(); ++i) upstream[i] += loss.rebuilt_grad[i];
  return {loss.value, g.network.backward(fake.cache, upstream).params};
}

GeneratorStep mse_regression_gradients(const GeneratorModel& g, const Tensor& features,
                                       const Tensor& originals) {
  const auto fake = g.network.forward(features);
  const auto loss = nn::mse_loss(fake.output, originals);
  return {loss.value, g.network.backward(fake.cache, loss.grad).params};
}

double discriminator_accuracy(const DiscriminatorModel& d, const Tensor& real, const Tensor& fake) {
  const auto r = d.score(real);
  const auto f = d.score(fake);
  std::size_t correct = 0;
  for (double p : r) correct += p >= 0.5 ? 1 : 0;
  for (double p : f) correct += p < 0.5 ? 1 : 0;
  return static_cast<double>(correct) / static_cast<double>(r.size() + f.size());
}

GanTrainResult train_n2rpp(const std::vector<PressureImage>& patients,
                           const std::vector<PressureImage>& healthy,
                           const ae::AutoencoderModel& ae, const GanConfig& cfg,
                           const GanObserver& on_iteration,
                           GanShapes shapes) {
  cfg.validate();
  if (patients.empty() || healthy.empty()) throw Error("train_n2rpp: empty dataset");
  if (shapes.generator.latent != ae.feature_dim()) {
    throw ShapeError("train_n2rpp: generator latent size differs from autoencoder features");
  }

  const Tensor features = standardized_features(ae, patients);
  const Tensor originals = to_batch(patients, BatchLayout::planes);
  const Tensor reals = to_batch(healthy, BatchLayout::planes);

  GanTrainResult result{GeneratorModel(make_generator_network(derive_seed(cfg.seed, 10), shapes.generator)),
                        DiscriminatorModel(make_discriminator_network(derive_seed(cfg.seed, 11),
                                                                      shapes.discriminator)),
                        {}};
  nn::Network& gnet = result.generator.network;
  nn::Network& dnet = result.discriminator.network;
  nn::AdamState g_adam(gnet.params(), cfg.adam);
  nn::AdamState d_adam(dnet.params(), cfg.adam);
  Rng rng(derive_seed(cfg.seed, 12));
  result.trace.reserve(cfg.iterations);

  for (std::size_t it = 1; it <= cfg.iterations; ++it) {
    GanTraceRow row;
    row.iteration = it;
    for (std::size_t k = 0; k < cfg.k_d; ++k) {
      const auto real_idx = draw(rng, healthy.size(), cfg.batch);
      const auto fake_idx = draw(rng, patients.size(), cfg.batch);
      const Tensor fake = gnet.predict(gather_rows(features, fake_idx));
      const auto on_real = dnet.forward(gather_rows(reals, real_idx));
      const auto on_fake = dnet.forward(fake);
      const auto loss = discriminator_loss(on_real.output, on_fake.output);
      require_finite(loss.value, it, "discriminator loss");

      std::size_t correct = 0;
      for (double p : on_real.output.values()) correct += p >= 0.5 ? 1 : 0;
      for (double p : on_fake.output.values()) correct += p < 0.5 ? 1 : 0;
      row.d_accuracy = static_cast<double>(correct) / static_cast<double>(2 * cfg.batch);
      row.l_d = loss.value;

      auto grads = dnet.backward(on_real.cache, loss.real_grad).params;
      add_into(grads, dnet.backward(on_fake.cache, loss.fake_grad).params);
      nn::adam_update(dnet.mutable_params(), grads, d_adam);
    }

    const auto idx = draw(rng, patients.size(), cfg.batch);
    const auto step = generator_gradients(result.generator, result.discriminator,
                                          gather_rows(features, idx), gather_rows(originals, idx),
                                          cfg.alpha);
    require_finite(step.loss, it, "generator loss");
    nn::adam_update(gnet.mutable_params(), step.grads, g_adam);
    row.l_g = step.loss;

    result.trace.push_back(row);
    if (on_iteration) on_iteration(row, result.generator, result.discriminator);
  }
  return result;
}

double objective_value(const GeneratorModel& g, const DiscriminatorModel& d,
                       const std::vector<PressureImage>& patients,
                       const std::vector<PressureImage>& healthy, const ae::AutoencoderModel& ae,
                       double alpha) {
  if (patients.empty() || healthy.empty()) throw Error("objective_value: empty dataset");
  const Tensor originals = to_batch(patients, BatchLayout::planes);
  const Tensor fake = g.generate(standardized_features(ae, patients));
  double log_real = 0.0, log_fake = 0.0;
  for (double p : d.score(to_batch(healthy, BatchLayout::planes))) {
    log_real += std::log(nn::clamp_probability(p));
  }
  for (double p : d.score(fake)) log_fake += std::log(1.0 - nn::clamp_probability(p));
  log_real /= static_cast<double>(healthy.size());
  log_fake /= static_cast<double>(patients.size());
  return (1.0 - alpha) * (log_real + log_fake) + alpha * nn::mse_loss(fake, originals).value;
}

}  // namespace n2rpp::gan
