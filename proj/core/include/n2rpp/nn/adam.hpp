#pragma once

#include <cstdint>

#include "n2rpp/nn/params.hpp"

namespace n2rpp::nn {

struct AdamConfig {
  double lr = 2e-4;
  double beta1 = 0.5;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  AdamConfig config;
  std::uint64_t step = 0;
  NetworkParams m;
  NetworkParams v;

  AdamState() = default;
  AdamState(const NetworkParams& params, AdamConfig cfg);
};

// Bias-corrected Adam step, in place. Rejects non-finite gradients (naming the
// parameter) before touching any state.
void adam_update(NetworkParams& params, const NetworkParams& grads, AdamState& state);

}  // namespace n2rpp::nn
