#include "n2rpp/nn/grad_check.hpp"

#include <algorithm>
#include <cmath>

#include "n2rpp/error.hpp"

namespace n2rpp::nn {

double relative_error(double analytic, double numeric) {
  return std::abs(analytic - numeric) / std::max(1e-8, std::abs(analytic) + std::abs(numeric));
}

GradCheckResult grad_check(const Network& net, const Tensor& input, const OutputLoss& loss,
                           double step) {
  if (net.params().scalar_count() > kGradCheckMaxParams) {
    throw Error("grad_check: too many parameters to enumerate (" +
                std::to_string(net.params().scalar_count()) + ")");
  }
  const auto fwd = net.forward(input);
  const auto analytic = net.backward(fwd.cache, loss(fwd.output).grad).params;

  Network probe = net;
  GradCheckResult result;
  for (std::size_t pi = 0; pi < probe.params().size(); ++pi) {
    const std::size_t n = probe.params()[pi].tensor.size();
    for (std::size_t k = 0; k < n; ++k) {
      const double saved = probe.params()[pi].tensor[k];
      probe.mutable_params()[pi].tensor[k] = saved + step;
      const double up = loss(probe.predict(input)).value;
      probe.mutable_params()[pi].tensor[k] = saved - step;
      const double down = loss(probe.predict(input)).value;
      probe.mutable_params()[pi].tensor[k] = saved;
      const double numeric = (up - down) / (2.0 * step);
      const double err = relative_error(analytic[pi].tensor[k], numeric);
      if (err > result.max_rel_error) result = {err, pi, k};
    }
  }
  return result;
}

double grad_check_input(const Network& net, const Tensor& input, const OutputLoss& loss,
                        double step) {
  const auto fwd = net.forward(input);
  BackwardOptions opts;
  opts.param_grads = false;
  const Tensor analytic = net.backward(fwd.cache, loss(fwd.output).grad, opts).input;
  Tensor probe = input;
  double worst = 0.0;
  for (std::size_t k = 0; k < probe.size(); ++k) {
    const double saved = probe[k];
    probe[k] = saved + step;
    const double up = loss(net.predict(probe)).value;
    probe[k] = saved - step;
    const double down = loss(net.predict(probe)).value;
    probe[k] = saved;
    worst = std::max(worst, relative_error(analytic[k], (up - down) / (2.0 * step)));
  }
  return worst;
}

}  // namespace n2rpp::nn
