#include "n2rpp/batch.hpp"

#include <algorithm>
#include <numeric>

#include "n2rpp/error.hpp"

namespace n2rpp {

Tensor gather_batch(std::span<const PressureImage> images, std::span<const std::size_t> indices,
                    BatchLayout layout) {
  if (images.empty() || indices.empty()) throw Error("gather_batch: empty batch");
  const std::size_t rows = images[indices[0]].grid.rows;
  const std::size_t cols = images[indices[0]].grid.cols;
  const Shape shape = layout == BatchLayout::flat ? Shape{indices.size(), rows * cols}
                                                  : Shape{indices.size(), 1, rows, cols};
  Tensor out(shape);
  for (std::size_t n = 0; n < indices.size(); ++n) {
    const Grid& g = images[indices[n]].grid;
    if (g.rows != rows || g.cols != cols || g.values.size() != rows * cols) {
      throw ShapeError("gather_batch: image '" + images[indices[n]].case_id + "' has a different size");
    }
    std::copy(g.values.begin(), g.values.end(), out.data() + n * rows * cols);
  }
  return out;
}

Tensor to_batch(std::span<const PressureImage> images, BatchLayout layout) {
  std::vector<std::size_t> idx(images.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return gather_batch(images, idx, layout);
}

Tensor gather_rows(const Tensor& batch, std::span<const std::size_t> indices) {
  if (batch.rank() == 0) throw ShapeError("gather_rows: scalar tensor");
  const std::size_t stride = batch.dim(0) ? batch.size() / batch.dim(0) : 0;
  Shape shape = batch.shape();
  shape[0] = indices.size();
  Tensor out(shape);
  for (std::size_t n = 0; n < indices.size(); ++n) {
    if (indices[n] >= batch.dim(0)) throw ShapeError("gather_rows: index out of range");
    std::copy_n(batch.data() + indices[n] * stride, stride, out.data() + n * stride);
  }
  return out;
}

Tensor concat_rows(const Tensor& a, const Tensor& b) {
  if (a.rank() == 0 || a.rank() != b.rank() ||
      !std::equal(a.shape().begin() + 1, a.shape().end(), b.shape().begin() + 1)) {
    throw ShapeError("concat_rows: " + shape_to_string(a.shape()) + " vs " + shape_to_string(b.shape()));
  }
  Shape shape = a.shape();
  shape[0] += b.dim(0);
  std::vector<double> data(a.values().begin(), a.values().end());
  data.insert(data.end(), b.values().begin(), b.values().end());
  return Tensor(shape, std::move(data));
}

Grid sample_grid(const Tensor& batch, std::size_t n, std::size_t rows, std::size_t cols) {
  if (batch.rank() == 0 || n >= batch.dim(0) || batch.size() / batch.dim(0) != rows * cols) {
    throw ShapeError("sample_grid: batch " + shape_to_string(batch.shape()) +
                     " has no sample of size " + std::to_string(rows * cols));
  }
  Grid g(rows, cols);
  std::copy_n(batch.data() + n * rows * cols, rows * cols, g.values.begin());
  return g;
}

}  // namespace n2rpp
