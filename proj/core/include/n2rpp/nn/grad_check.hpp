#pragma once

#include <functional>

#include "n2rpp/nn/loss.hpp"
#include "n2rpp/nn/network.hpp"

namespace n2rpp::nn {

// Loss over a network output: value plus gradient w.r.t. that output.
using OutputLoss = std::function<TensorLoss(const Tensor& output)>;

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t worst_param = 0;
  std::size_t worst_offset = 0;
};

inline constexpr std::size_t kGradCheckMaxParams = 20000;
inline constexpr double kGradCheckStep = 1e-5;

double relative_error(double analytic, double numeric);

// Compares backprop parameter gradients with central finite differences.
GradCheckResult grad_check(const Network& net, const Tensor& input, const OutputLoss& loss,
                           double step = kGradCheckStep);

// Same comparison for the gradient w.r.t. the input.
double grad_check_input(const Network& net, const Tensor& input, const OutputLoss& loss,
                        double step = kGradCheckStep);

}  // namespace n2rpp::nn
