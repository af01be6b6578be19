#include <benchmark/benchmark.h>

#include "n2rpp/nn/kernels.hpp"
#include "n2rpp/preprocess.hpp"
#include "n2rpp/random.hpp"
#include "n2rpp/synthdata.hpp"

namespace n2rpp {
namespace {

using nn::kernels::ConvGeometry;

Tensor random_tensor(Shape shape, std::uint64_t seed) {
  Rng rng(seed);
  Tensor t(std::move(shape));
  for (double& v : t.values()) v = rng.uniform(-1.0, 1.0);
  return t;
}

// Discriminator first layer: (N,1,52,32) -> (N,32,26,16).
void BM_Conv2dForward(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Tensor x = random_tensor({n, 1, kImageRows, kImageCols}, 1);
  const Tensor w = random_tensor({32, 1, 4, 4}, 2);
  const Tensor b = random_tensor({32}, 3);
  for (auto _ : state) benchmark::DoNotOptimize(nn::kernels::conv2d_forward(x, w, b, ConvGeometry{}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Conv2dForward)->Arg(1)->Arg(32);

// Discriminator second layer, forward and backward: (N,32,26,16) -> (N,64,13,8).
void BM_Conv2dBackward(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Tensor x = random_tensor({n, 32, 26, 16}, 1);
  const Tensor w = random_tensor({64, 32, 4, 4}, 2);
  const Tensor dy = random_tensor({n, 64, 13, 8}, 3);
  for (auto _ : state) {
    Tensor dw(w.shape()), db({64}), dx;
    nn::kernels::conv2d_backward(x, w, dy, ConvGeometry{}, &dw, &db, &dx);
    benchmark::DoNotOptimize(dx);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Conv2dBackward)->Arg(1)->Arg(32);

// Generator first upsampling: (N,64,13,8) -> (N,32,26,16).
void BM_Deconv2dForward(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Tensor x = random_tensor({n, 64, 13, 8}, 1);
  const Tensor w = random_tensor({64, 32, 4, 4}, 2);
  const Tensor b = random_tensor({32}, 3);
  for (auto _ : state) benchmark::DoNotOptimize(nn::kernels::deconv2d_forward(x, w, b, ConvGeometry{}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Deconv2dForward)->Arg(1)->Arg(32);

void BM_Deconv2dBackward(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Tensor x = random_tensor({n, 64, 13, 8}, 1);
  const Tensor w = random_tensor({64, 32, 4, 4}, 2);
  const Tensor dy = random_tensor({n, 32, 26, 16}, 3);
  for (auto _ : state) {
    Tensor dw(w.shape()), db({32}), dx;
    nn::kernels::deconv2d_backward(x, w, dy, ConvGeometry{}, &dw, &db, &dx);
    benchmark::DoNotOptimize(dx);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Deconv2dBackward)->Arg(1)->Arg(32);

void BM_DenseForward(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Tensor x = random_tensor({n, kImagePixels}, 1);
  const Tensor w = random_tensor({kImagePixels, kFeatureDim}, 2);
  const Tensor b = random_tensor({kFeatureDim}, 3);
  for (auto _ : state) benchmark::DoNotOptimize(nn::kernels::dense_forward(x, w, b));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DenseForward)->Arg(1)->Arg(32);

void BM_PreprocessSequence(benchmark::State& state) {
  synth::CohortSpec spec;
  spec.n_healthy = 1;
  spec.n_acld = 1;
  const auto seq = synth::generate_cohort(spec).front();
  for (auto _ : state) benchmark::DoNotOptimize(preprocess::to_image(seq, Aggregation::avg));
}
BENCHMARK(BM_PreprocessSequence);

}  // namespace
}  // namespace n2rpp

BENCHMARK_MAIN();
