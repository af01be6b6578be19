#include <benchmark/benchmark.h>

#include "n2rpp/autoencoder.hpp"
#include "n2rpp/batch.hpp"
#include "n2rpp/classifier.hpp"
#include "n2rpp/gan.hpp"
#include "n2rpp/preprocess.hpp"
#include "n2rpp/random.hpp"
#include "n2rpp/saliency.hpp"
#include "n2rpp/synthdata.hpp"

namespace n2rpp {
namespace {

std::vector<PressureImage> images(std::size_t n) {
  synth::CohortSpec spec;
  spec.n_healthy = n / 2;
  spec.n_acld = n - n / 2;
  std::vector<PressureImage> out;
  for (const auto& seq : synth::generate_cohort(spec)) out.push_back(preprocess::to_image(seq, Aggregation::max));
  return out;
}

Tensor features(std::size_t n) {
  Rng rng(5);
  Tensor t({n, kFeatureDim});
  for (double& v : t.values()) v = rng.normal();
  return t;
}

// One generator update's gradient work at the default batch size.
void BM_GeneratorGradients(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const gan::GeneratorModel g(gan::make_generator_network(1));
  const gan::DiscriminatorModel d(gan::make_discriminator_network(2));
  const Tensor x = features(n);
  const Tensor y = to_batch(images(n), BatchLayout::planes);
  for (auto _ : state) benchmark::DoNotOptimize(gan::generator_gradients(g, d, x, y, 0.03));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GeneratorGradients)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_DiscriminatorForwardBackward(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto net = gan::make_discriminator_network(2);
  const Tensor y = to_batch(images(n), BatchLayout::planes);
  const Tensor up({n, 1}, 1.0);
  for (auto _ : state) {
    const auto fwd = net.forward(y);
    benchmark::DoNotOptimize(net.backward(fwd.cache, up));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DiscriminatorForwardBackward)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_GanIterations(benchmark::State& state) {
  const auto data = images(64);
  std::vector<PressureImage> healthy, patients;
  for (const auto& img : data) (img.label == Label::healthy ? healthy : patients).push_back(img);
  ae::AutoencoderModel ae(3);
  ae.mark_trained();
  gan::GanConfig cfg;
  cfg.iterations = 10;
  for (auto _ : state) benchmark::DoNotOptimize(gan::train_n2rpp(patients, healthy, ae, cfg));
  state.SetItemsProcessed(state.iterations() * 10);
}
BENCHMARK(BM_GanIterations)->Unit(benchmark::kMillisecond);

void BM_AutoencoderEpoch(benchmark::State& state) {
  const auto data = images(static_cast<std::size_t>(state.range(0)));
  ae::AeTrainConfig cfg;
  cfg.epochs = 1;
  for (auto _ : state) benchmark::DoNotOptimize(ae::train_autoencoder(data, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AutoencoderEpoch)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_ClassifierPredict(benchmark::State& state) {
  const auto data = images(static_cast<std::size_t>(state.range(0)));
  auto model = clf::ClassifierModel::from_params(clf::make_classifier_network(4).params());
  for (auto _ : state) benchmark::DoNotOptimize(model.predict_all(data));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ClassifierPredict)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_GuidedBackprop(benchmark::State& state) {
  const auto data = images(2);
  auto model = clf::ClassifierModel::from_params(clf::make_classifier_network(4).params());
  for (auto _ : state) benchmark::DoNotOptimize(saliency::guided_backprop(model, data[0]));
}
BENCHMARK(BM_GuidedBackprop);

}  // namespace
}  // namespace n2rpp
