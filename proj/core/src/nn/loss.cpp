#include "n2rpp/nn/loss.hpp"

#include <algorithm>
#include <cmath>

#include "n2rpp/error.hpp"

namespace n2rpp::nn {

TensorLoss mse_loss(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) {
    throw ShapeError("mse_loss: " + shape_to_string(a.shape()) + " vs " + shape_to_string(b.shape()));
  }
  TensorLoss out{0.0, Tensor(a.shape())};
  if (a.empty()) return out;
  const double n = static_cast<double>(a.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
    out.grad[i] = 2.0 * d / n;
  }
  out.value = acc / n;
  return out;
}

double clamp_probability(double p) { return std::clamp(p, kProbClamp, 1.0 - kProbClamp); }

ScalarLoss bce_loss(double p, int label) {
  if (label != 0 && label != 1) throw Error("bce_loss: label must be 0 or 1");
  const double q = clamp_probability(p);
  if (label == 1) return {-std::log(q), -1.0 / q};
  return {-std::log(1.0 - q), 1.0 / (1.0 - q)};
}

}  // namespace n2rpp::nn
