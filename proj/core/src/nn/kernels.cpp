#include "n2rpp/nn/kernels.hpp"

#include <Eigen/Core>

#include "n2rpp/error.hpp"

namespace n2rpp::nn::kernels {
namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatMap = Eigen::Map<RowMat>;
using ConstMatMap = Eigen::Map<const RowMat>;
using Index = Eigen::Index;

Index idx(std::size_t v) { return static_cast<Index>(v); }

// Image (C, H, W) -> columns (C*k*k, Ho*Wo) for a convolution with geometry g.
void im2col(const double* img, std::size_t channels, std::size_t h, std::size_t w,
            const ConvGeometry& g, std::size_t ho, std::size_t wo, double* cols) {
  const std::size_t k = g.kernel;
  const auto pad = static_cast<std::ptrdiff_t>(g.padding);
  for (std::size_t c = 0; c < channels; ++c) {
    for (std::size_t ki = 0; ki < k; ++ki) {
      for (std::size_t kj = 0; kj < k; ++kj) {
        double* row = cols + ((c * k + ki) * k + kj) * ho * wo;
        for (std::size_t oy = 0; oy < ho; ++oy) {
          const std::ptrdiff_t iy = static_cast<std::ptrdiff_t>(oy * g.stride + ki) - pad;
          for (std::size_t ox = 0; ox < wo; ++ox) {
            const std::ptrdiff_t ix = static_cast<std::ptrdiff_t>(ox * g.stride + kj) - pad;
            const bool inside = iy >= 0 && ix >= 0 && iy < static_cast<std::ptrdiff_t>(h) &&
                                ix < static_cast<std::ptrdiff_t>(w);
            row[oy * wo + ox] = inside ? img[(c * h + iy) * w + ix] : 0.0;
          }
        }
      }
    }
  }
}

// Adjoint of im2col: scatter-adds columns back into an image (C, H, W).
void col2im(const double* cols, std::size_t channels, std::size_t h, std::size_t w,
            const ConvGeometry& g, std::size_t ho, std::size_t wo, double* img) {
  const std::size_t k = g.kernel;
  const auto pad = static_cast<std::ptrdiff_t>(g.padding);
  for (std::size_t c = 0; c < channels; ++c) {
    for (std::size_t ki = 0; ki < k; ++ki) {
      for (std::size_t kj = 0; kj < k; ++kj) {
        const double* row = cols + ((c * k + ki) * k + kj) * ho * wo;
        for (std::size_t oy = 0; oy < ho; ++oy) {
          const std::ptrdiff_t iy = static_cast<std::ptrdiff_t>(oy * g.stride + ki) - pad;
          if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(h)) continue;
          for (std::size_t ox = 0; ox < wo; ++ox) {
            const std::ptrdiff_t ix = static_cast<std::ptrdiff_t>(ox * g.stride + kj) - pad;
            if (ix < 0 || ix >= static_cast<std::ptrdiff_t>(w)) continue;
            img[(c * h + iy) * w + ix] += row[oy * wo + ox];
          }
        }
      }
    }
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw ShapeError(what);
}

}  // namespace

std::size_t conv_out_extent(std::size_t in, const ConvGeometry& g) {
  return (in + 2 * g.padding - g.kernel) / g.stride + 1;
}

std::size_t deconv_out_extent(std::size_t in, const ConvGeometry& g) {
  return (in - 1) * g.stride + g.kernel - 2 * g.padding;
}

Tensor dense_forward(const Tensor& x, const Tensor& w, const Tensor& b) {
  require(x.rank() == 2 && w.rank() == 2 && x.dim(1) == w.dim(0) && b.size() == w.dim(1),
          "dense_forward: shape mismatch");
  const std::size_t n = x.dim(0), in = w.dim(0), out = w.dim(1);
  Tensor y({n, out});
  MatMap ym(y.data(), idx(n), idx(out));
  ym.noalias() = ConstMatMap(x.data(), idx(n), idx(in)) * ConstMatMap(w.data(), idx(in), idx(out));
  ym.rowwise() += Eigen::Map<const Eigen::RowVectorXd>(b.data(), idx(out));
  return y;
}

void dense_backward(const Tensor& x, const Tensor& w, const Tensor& dy, Tensor* dw, Tensor* db,
                    Tensor* dx) {
  const std::size_t n = x.dim(0), in = w.dim(0), out = w.dim(1);
  require(dy.rank() == 2 && dy.dim(0) == n && dy.dim(1) == out, "dense_backward: bad upstream");
  ConstMatMap dym(dy.data(), idx(n), idx(out));
  ConstMatMap xm(x.data(), idx(n), idx(in));
  if (dw) MatMap(dw->data(), idx(in), idx(out)).noalias() += xm.transpose() * dym;
  if (db) Eigen::Map<Eigen::RowVectorXd>(db->data(), idx(out)) += dym.colwise().sum();
  if (dx) {
    *dx = Tensor({n, in});
    MatMap(dx->data(), idx(n), idx(in)).noalias() =
        dym * ConstMatMap(w.data(), idx(in), idx(out)).transpose();
  }
}

Tensor conv2d_forward(const Tensor& x, const Tensor& w, const Tensor& b, const ConvGeometry& g) {
  require(x.rank() == 4 && w.rank() == 4 && w.dim(1) == x.dim(1) && w.dim(2) == g.kernel &&
              w.dim(3) == g.kernel && b.size() == w.dim(0),
          "conv2d_forward: shape mismatch");
  const std::size_t n = x.dim(0), c = x.dim(1), h = x.dim(2), wd = x.dim(3);
  const std::size_t o = w.dim(0), kk = c * g.kernel * g.kernel;
  const std::size_t ho = conv_out_extent(h, g), wo = conv_out_extent(wd, g);
  Tensor y({n, o, ho, wo});
  AlignedVector cols(kk * ho * wo);
  ConstMatMap wm(w.data(), idx(o), idx(kk));
  ConstMatMap colm(cols.data(), idx(kk), idx(ho * wo));
  const Eigen::Map<const Eigen::VectorXd> bias(b.data(), idx(o));
  for (std::size_t s = 0; s < n; ++s) {
    im2col(x.data() + s * c * h * wd, c, h, wd, g, ho, wo, cols.data());
    MatMap ym(y.data() + s * o * ho * wo, idx(o), idx(ho * wo));
    ym.noalias() = wm * colm;
    ym.colwise() += bias;
  }
  return y;
}

void conv2d_backward(const Tensor& x, const Tensor& w, const Tensor& dy, const ConvGeometry& g,
                     Tensor* dw, Tensor* db, Tensor* dx) {
  const std::size_t n = x.dim(0), c = x.dim(1), h = x.dim(2), wd = x.dim(3);
  const std::size_t o = w.dim(0), kk = c * g.kernel * g.kernel;
  const std::size_t ho = conv_out_extent(h, g), wo = conv_out_extent(wd, g);
  require(dy.shape() == Shape({n, o, ho, wo}), "conv2d_backward: bad upstream");
  AlignedVector cols(kk * ho * wo);
  ConstMatMap wm(w.data(), idx(o), idx(kk));
  MatMap colm(cols.data(), idx(kk), idx(ho * wo));
  if (dx) *dx = Tensor(x.shape());
  for (std::size_t s = 0; s < n; ++s) {
    ConstMatMap dym(dy.data() + s * o * ho * wo, idx(o), idx(ho * wo));
    if (db) Eigen::Map<Eigen::VectorXd>(db->data(), idx(o)) += dym.rowwise().sum();
    if (dw) {
      im2col(x.data() + s * c * h * wd, c, h, wd, g, ho, wo, cols.data());
      MatMap(dw->data(), idx(o), idx(kk)).noalias() += dym * colm.transpose();
    }
    if (dx) {
      colm.noalias() = wm.transpose() * dym;
      col2im(cols.data(), c, h, wd, g, ho, wo, dx->data() + s * c * h * wd);
    }
  }
}

Tensor deconv2d_forward(const Tensor& x, const Tensor& w, const Tensor& b,
                        const ConvGeometry& g) {
  require(x.rank() == 4 && w.rank() == 4 && w.dim(0) == x.dim(1) && w.dim(2) == g.kernel &&
              w.dim(3) == g.kernel && b.size() == w.dim(1),
          "deconv2d_forward: shape mismatch");
  const std::size_t n = x.dim(0), c = x.dim(1), h = x.dim(2), wd = x.dim(3);
  const std::size_t o = w.dim(1), kk = o * g.kernel * g.kernel;
  const std::size_t ho = deconv_out_extent(h, g), wo = deconv_out_extent(wd, g);
  Tensor y({n, o, ho, wo});
  AlignedVector cols(kk * h * wd);
  ConstMatMap wm(w.data(), idx(c), idx(kk));
  MatMap colm(cols.data(), idx(kk), idx(h * wd));
  for (std::size_t s = 0; s < n; ++s) {
    colm.noalias() = wm.transpose() * ConstMatMap(x.data() + s * c * h * wd, idx(c), idx(h * wd));
    double* out = y.data() + s * o * ho * wo;
    col2im(cols.data(), o, ho, wo, g, h, wd, out);
    for (std::size_t oc = 0; oc < o; ++oc) {
      for (std::size_t i = 0; i < ho * wo; ++i) out[oc * ho * wo + i] += b[oc];
    }
  }
  return y;
}

void deconv2d_backward(const Tensor& x, const Tensor& w, const Tensor& dy, const ConvGeometry& g,
                       Tensor* dw, Tensor* db, Tensor* dx) {
  const std::size_t n = x.dim(0), c = x.dim(1), h = x.dim(2), wd = x.dim(3);
  const std::size_t o = w.dim(1), kk = o * g.kernel * g.kernel;
  const std::size_t ho = deconv_out_extent(h, g), wo = deconv_out_extent(wd, g);
  require(dy.shape() == Shape({n, o, ho, wo}), "deconv2d_backward: bad upstream");
  AlignedVector cols(kk * h * wd);
  ConstMatMap wm(w.data(), idx(c), idx(kk));
  ConstMatMap colm(cols.data(), idx(kk), idx(h * wd));
  if (dx) *dx = Tensor(x.shape());
  for (std::size_t s = 0; s < n; ++s) {
    const double* dys = dy.data() + s * o * ho * wo;
    if (db) {
      for (std::size_t oc = 0; oc < o; ++oc) {
        double acc = 0.0;
        for (std::size_t i = 0; i < ho * wo; ++i) acc += dys[oc * ho * wo + i];
        (*db)[oc] += acc;
      }
    }
    if (!dw && !dx) continue;
    im2col(dys, o, ho, wo, g, h, wd, cols.data());
    if (dw) {
      MatMap(dw->data(), idx(c), idx(kk)).noalias() +=
          ConstMatMap(x.data() + s * c * h * wd, idx(c), idx(h * wd)) * colm.transpose();
    }
    if (dx) MatMap(dx->data() + s * c * h * wd, idx(c), idx(h * wd)).noalias() = wm * colm;
  }
}

}  // namespace n2rpp::nn::kernels
