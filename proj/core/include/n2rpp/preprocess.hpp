#pragma once

#include "n2rpp/types.hpp"

namespace n2rpp::preprocess {

// Throws Error unless the sequence has >= 1 frame of the declared size, all
// values finite and nonnegative, and at least one nonzero value.
void validate(const PressureFrameSequence& seq);

Grid aggregate_max(const PressureFrameSequence& seq);
Grid aggregate_sum(const PressureFrameSequence& seq);
// Per-cell mean over frames where the cell is nonzero; 0 where no frame is.
Grid aggregate_effective_avg(const PressureFrameSequence& seq);
Grid aggregate(const PressureFrameSequence& seq, Aggregation agg);

// Crops to the bounding box of nonzero cells and bilinearly resamples
// (half-pixel centers, edge clamped) to rows x cols. Rejects all-zero grids.
Grid crop_resample(const Grid& grid, std::size_t rows = kImageRows, std::size_t cols = kImageCols);

// (g - min)/(max - min); an all-zero grid when max == min.
PressureImage minmax_normalize(const Grid& grid);

Grid denormalize(const PressureImage& img);

// aggregate -> crop_resample -> minmax_normalize, carrying metadata along.
PressureImage to_image(const PressureFrameSequence& seq, Aggregation agg);

inline constexpr double kMinFeatureStd = 1e-12;

// Per-vector: subtract the component mean, divide by the population std.
FeatureVector standardize_features(const FeatureVector& v);

}  // namespace n2rpp::preprocess
