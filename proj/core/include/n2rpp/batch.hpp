#pragma once

#include <span>
#include <vector>

#include "n2rpp/tensor.hpp"
#include "n2rpp/types.hpp"

namespace n2rpp {

enum class BatchLayout {
  flat,   // (N, rows*cols)
  planes  // (N, 1, rows, cols)
};

Tensor gather_batch(std::span<const PressureImage> images, std::span<const std::size_t> indices,
                    BatchLayout layout);
Tensor to_batch(std::span<const PressureImage> images, BatchLayout layout);

// Rows `indices` of a tensor along its leading (batch) dimension.
Tensor gather_rows(const Tensor& batch, std::span<const std::size_t> indices);
// Concatenation along the leading dimension; trailing shapes must agree.
Tensor concat_rows(const Tensor& a, const Tensor& b);

// Sample n of a batch with rows*cols values per sample, as a grid.
Grid sample_grid(const Tensor& batch, std::size_t n, std::size_t rows = kImageRows,
                 std::size_t cols = kImageCols);

}  // namespace n2rpp
