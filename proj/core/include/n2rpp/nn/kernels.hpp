#pragma once

// Batched layer kernels. Activations are NCHW (conv) or (N, units) (dense).

#include <cstddef>

#include "n2rpp/tensor.hpp"

namespace n2rpp::nn::kernels {

struct ConvGeometry {
  std::size_t kernel = 4;
  std::size_t stride = 2;
  std::size_t padding = 1;
};

std::size_t conv_out_extent(std::size_t in, const ConvGeometry& g);
std::size_t deconv_out_extent(std::size_t in, const ConvGeometry& g);

Tensor dense_forward(const Tensor& x, const Tensor& w, const Tensor& b);
// dw/db are accumulated into when non-null; dx is overwritten when non-null.
void dense_backward(const Tensor& x, const Tensor& w, const Tensor& dy, Tensor* dw, Tensor* db,
                    Tensor* dx);

Tensor conv2d_forward(const Tensor& x, const Tensor& w, const Tensor& b, const ConvGeometry& g);
void conv2d_backward(const Tensor& x, const Tensor& w, const Tensor& dy, const ConvGeometry& g,
                     Tensor* dw, Tensor* db, Tensor* dx);

Tensor deconv2d_forward(const Tensor& x, const Tensor& w, const Tensor& b,
                        const ConvGeometry& g);
void deconv2d_backward(const Tensor& x, const Tensor& w, const Tensor& dy, const ConvGeometry& g,
                       Tensor* dw, Tensor* db, Tensor* dx);

}  // namespace n2rpp::nn::kernels
