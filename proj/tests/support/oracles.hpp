#pragma once

// Reference implementations used only by tests. They follow the textbook
// definitions with plain loops and share no code with the library kernels.

#include <algorithm>
#include <cstddef>
#include <vector>

#include "n2rpp/random.hpp"
#include "n2rpp/tensor.hpp"
#include "n2rpp/types.hpp"

namespace n2rpp::oracle {

inline Tensor random_tensor(Shape shape, Rng& rng, double lo = -1.0, double hi = 1.0) {
  Tensor t(std::move(shape));
  for (double& v : t.values()) v = rng.uniform(lo, hi);
  return t;
}

// y[n,o,i,j] = b[o] + sum_{c,ki,kj} w[o,c,ki,kj] x[n,c,i*s+ki-p, j*s+kj-p]
inline Tensor conv2d(const Tensor& x, const Tensor& w, const Tensor& b, std::size_t s, std::size_t p) {
  const std::size_t n = x.dim(0), c = x.dim(1), h = x.dim(2), wd = x.dim(3);
  const std::size_t o = w.dim(0), k = w.dim(2);
  const std::size_t ho = (h + 2 * p - k) / s + 1, wo = (wd + 2 * p - k) / s + 1;
  Tensor y({n, o, ho, wo});
  for (std::size_t ni = 0; ni < n; ++ni)
    for (std::size_t oc = 0; oc < o; ++oc)
      for (std::size_t i = 0; i < ho; ++i)
        for (std::size_t j = 0; j < wo; ++j) {
          double acc = b[oc];
          for (std::size_t ci = 0; ci < c; ++ci)
            for (std::size_t ki = 0; ki < k; ++ki)
              for (std::size_t kj = 0; kj < k; ++kj) {
                const long r = static_cast<long>(i * s + ki) - static_cast<long>(p);
                const long q = static_cast<long>(j * s + kj) - static_cast<long>(p);
                if (r < 0 || q < 0 || r >= static_cast<long>(h) || q >= static_cast<long>(wd)) continue;
                acc += w[((oc * c + ci) * k + ki) * k + kj] *
                       x[((ni * c + ci) * h + static_cast<std::size_t>(r)) * wd + static_cast<std::size_t>(q)];
              }
          y[((ni * o + oc) * ho + i) * wo + j] = acc;
        }
  return y;
}

// Transposed convolution by scattering: every input pixel stamps its kernel
// (weights (in, out, k, k)) onto the stride-spaced output grid.
inline Tensor deconv2d(const Tensor& x, const Tensor& w, const Tensor& b, std::size_t s, std::size_t p) {
  const std::size_t n = x.dim(0), c = x.dim(1), h = x.dim(2), wd = x.dim(3);
  const std::size_t o = w.dim(1), k = w.dim(2);
  const std::size_t ho = (h - 1) * s + k - 2 * p, wo = (wd - 1) * s + k - 2 * p;
  Tensor y({n, o, ho, wo});
  for (std::size_t ni = 0; ni < n; ++ni) {
    for (std::size_t oc = 0; oc < o; ++oc)
      for (std::size_t i = 0; i < ho * wo; ++i) y[(ni * o + oc) * ho * wo + i] = b[oc];
    for (std::size_t ci = 0; ci < c; ++ci)
      for (std::size_t i = 0; i < h; ++i)
        for (std::size_t j = 0; j < wd; ++j)
          for (std::size_t oc = 0; oc < o; ++oc)
            for (std::size_t ki = 0; ki < k; ++ki)
              for (std::size_t kj = 0; kj < k; ++kj) {
                const long r = static_cast<long>(i * s + ki) - static_cast<long>(p);
                const long q = static_cast<long>(j * s + kj) - static_cast<long>(p);
                if (r < 0 || q < 0 || r >= static_cast<long>(ho) || q >= static_cast<long>(wo)) continue;
                y[((ni * o + oc) * ho + static_cast<std::size_t>(r)) * wo + static_cast<std::size_t>(q)] +=
                    w[((ci * o + oc) * k + ki) * k + kj] * x[((ni * c + ci) * h + i) * wd + j];
              }
  }
  return y;
}

// O(P*N) pairwise AUC with ties counted one half.
inline double pairwise_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
  double wins = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0) continue;
      ++pairs;
      if (scores[i] > scores[j]) wins += 1.0;
      else if (scores[i] == scores[j]) wins += 0.5;
    }
  }
  return wins / static_cast<double>(pairs);
}

// Per-cell loops over frames for the three aggregations.
inline Grid brute_aggregate(const PressureFrameSequence& seq, Aggregation agg) {
  Grid out(seq.rows, seq.cols);
  for (std::size_t r = 0; r < seq.rows; ++r) {
    for (std::size_t c = 0; c < seq.cols; ++c) {
      double mx = 0.0, sum = 0.0;
      int nonzero = 0;
      for (const Grid& f : seq.frames) {
        const double v = f(r, c);
        if (v > mx) mx = v;
        sum += v;
        if (v != 0.0) ++nonzero;
      }
      switch (agg) {
        case Aggregation::max: out(r, c) = mx; break;
        case Aggregation::sum: out(r, c) = sum; break;
        case Aggregation::avg: out(r, c) = nonzero ? sum / nonzero : 0.0; break;
        case Aggregation::raw: break;
      }
    }
  }
  return out;
}

// Independent stratification check helper: labels of a subset.
inline std::size_t count_label(const std::vector<PressureImage>& imgs, const std::vector<std::size_t>& idx,
                               Label label) {
  return static_cast<std::size_t>(std::count_if(idx.begin(), idx.end(),
                                                [&](std::size_t i) { return imgs[i].label == label; }));
}

}  // namespace n2rpp::oracle
