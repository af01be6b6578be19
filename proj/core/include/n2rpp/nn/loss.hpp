#pragma once

#include "n2rpp/tensor.hpp"

namespace n2rpp::nn {

inline constexpr double kProbClamp = 1e-7;

struct TensorLoss {
  double value = 0.0;
  Tensor grad;  // d value / d a
};

struct ScalarLoss {
  double value = 0.0;
  double grad = 0.0;  // d value / d p
};

// mean((a - b)^2); gradient 2(a - b)/N.
TensorLoss mse_loss(const Tensor& a, const Tensor& b);

double clamp_probability(double p);

// -[y ln p + (1 - y) ln(1 - p)] with p clamped to [1e-7, 1 - 1e-7].
ScalarLoss bce_loss(double p, int label);

}  // namespace n2rpp::nn
