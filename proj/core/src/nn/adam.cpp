#include "n2rpp/nn/adam.hpp"

#include <cmath>

#include "n2rpp/error.hpp"

namespace n2rpp::nn {

AdamState::AdamState(const NetworkParams& params, AdamConfig cfg)
    : config(cfg), m(params.zeros_like()), v(params.zeros_like()) {}

void adam_update(NetworkParams& params, const NetworkParams& grads, AdamState& state) {
  if (!params.same_layout(grads)) throw ShapeError("adam_update: gradient layout mismatch");
  if (state.m.empty() && state.v.empty() && !params.empty()) {
    state.m = params.zeros_like();
    state.v = params.zeros_like();
  }
  if (!params.same_layout(state.m) || !params.same_layout(state.v)) {
    throw ShapeError("adam_update: moment layout mismatch");
  }
  for (const auto& g : grads) {
    if (!g.tensor.all_finite()) throw NumericError("non-finite gradient for '" + g.name + "'");
  }

  const auto& c = state.config;
  state.step += 1;
  const double t = static_cast<double>(state.step);
  const double bc1 = 1.0 - std::pow(c.beta1, t);
  const double bc2 = 1.0 - std::pow(c.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    Tensor& w = params[i].tensor;
    const Tensor& g = grads[i].tensor;
    Tensor& m = state.m[i].tensor;
    Tensor& v = state.v[i].tensor;
    for (std::size_t k = 0; k < w.size(); ++k) {
      m[k] = c.beta1 * m[k] + (1.0 - c.beta1) * g[k];
      v[k] = c.beta2 * v[k] + (1.0 - c.beta2) * g[k] * g[k];
      const double m_hat = m[k] / bc1;
      const double v_hat = v[k] / bc2;
      w[k] -= c.lr * m_hat / (std::sqrt(v_hat) + c.eps);
    }
  }
}

}  // namespace n2rpp::nn
