#include "n2rpp/preprocess.hpp"

#include <algorithm>
#include <cmath>

#include "n2rpp/error.hpp"

namespace n2rpp {

std::string_view to_string(FootSide side) { return side == FootSide::left ? "L" : "R"; }

std::string_view to_string(Label label) { return label == Label::healthy ? "healthy" : "acld"; }

std::string_view to_string(Aggregation agg) {
  switch (agg) {
    case Aggregation::raw: return "raw";
    case Aggregation::max: return "max";
    case Aggregation::sum: return "sum";
    case Aggregation::avg: return "avg";
  }
  return "?";
}

FootSide parse_foot_side(std::string_view text) {
  if (text == "L") return FootSide::left;
  if (text == "R") return FootSide::right;
  throw FormatError("foot side must be L or R, got '" + std::string(text) + "'");
}

Label parse_label(std::string_view text) {
  if (text == "healthy") return Label::healthy;
  if (text == "acld") return Label::acld;
  throw FormatError("label must be healthy or acld, got '" + std::string(text) + "'");
}

Aggregation parse_aggregation(std::string_view text) {
  if (text == "raw") return Aggregation::raw;
  if (text == "max") return Aggregation::max;
  if (text == "sum") return Aggregation::sum;
  if (text == "avg") return Aggregation::avg;
  throw FormatError("aggregation must be raw|max|sum|avg, got '" + std::string(text) + "'");
}

namespace preprocess {

void validate(const PressureFrameSequence& seq) {
  if (seq.rows == 0 || seq.cols == 0) throw Error("sequence has an empty grid");
  if (seq.frames.empty()) throw Error("sequence has no frames");
  bool any_nonzero = false;
  for (std::size_t k = 0; k < seq.frames.size(); ++k) {
    const Grid& f = seq.frames[k];
    if (f.rows != seq.rows || f.cols != seq.cols || f.values.size() != seq.rows * seq.cols) {
      throw ShapeError("frame " + std::to_string(k) + " does not match the sequence grid size");
    }
    for (double v : f.values) {
      if (!std::isfinite(v) || v < 0.0) {
        throw Error("frame " + std::to_string(k) + " has a negative or non-finite value");
      }
      any_nonzero = any_nonzero || v != 0.0;
    }
  }
  if (!any_nonzero) throw Error("sequence '" + seq.case_id + "' is all zero");
}

Grid aggregate_max(const PressureFrameSequence& seq) {
  validate(seq);
  Grid out(seq.rows, seq.cols);
  for (const Grid& f : seq.frames) {
    for (std::size_t i = 0; i < out.size(); ++i) out.values[i] = std::max(out.values[i], f.values[i]);
  }
  return out;
}

Grid aggregate_sum(const PressureFrameSequence& seq) {
  validate(seq);
  Grid out(seq.rows, seq.cols);
  for (const Grid& f : seq.frames) {
    for (std::size_t i = 0; i < out.size(); ++i) out.values[i] += f.values[i];
  }
  return out;
}

Grid aggregate_effective_avg(const PressureFrameSequence& seq) {
  validate(seq);
  Grid out(seq.rows, seq.cols);
  std::vector<std::size_t> count(out.size(), 0);
  for (const Grid& f : seq.frames) {
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (f.values[i] != 0.0) {
        out.values[i] += f.values[i];
        ++count[i];
      }
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.values[i] = count[i] ? out.values[i] / static_cast<double>(count[i]) : 0.0;
  }
  return out;
}

Grid aggregate(const PressureFrameSequence& seq, Aggregation agg) {
  switch (agg) {
    case Aggregation::max: return aggregate_max(seq);
    case Aggregation::sum: return aggregate_sum(seq);
    case Aggregation::avg: return aggregate_effective_avg(seq);
    case Aggregation::raw: break;
  }
  throw Error("aggregate: 'raw' is not an aggregation");
}

Grid crop_resample(const Grid& grid, std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) throw Error("crop_resample: empty target size");
  std::size_t r0 = grid.rows, r1 = 0, c0 = grid.cols, c1 = 0;
  for (std::size_t r = 0; r < grid.rows; ++r) {
    for (std::size_t c = 0; c < grid.cols; ++c) {
      if (grid(r, c) != 0.0) {
        r0 = std::min(r0, r);
        r1 = std::max(r1, r);
        c0 = std::min(c0, c);
        c1 = std::max(c1, c);
      }
    }
  }
  if (r0 > r1) throw Error("crop_resample: grid has no nonzero cell");

  const std::size_t h = r1 - r0 + 1, w = c1 - c0 + 1;
  const double sy = static_cast<double>(h) / static_cast<double>(rows);
  const double sx = static_cast<double>(w) / static_cast<double>(cols);
  const auto at = [&](std::size_t r, std::size_t c) { return grid(r0 + r, c0 + c); };

  Grid out(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const double fy = std::clamp((static_cast<double>(r) + 0.5) * sy - 0.5, 0.0,
                                 static_cast<double>(h - 1));
    const auto y0 = static_cast<std::size_t>(std::floor(fy));
    const std::size_t y1 = std::min(y0 + 1, h - 1);
    const double ty = fy - static_cast<double>(y0);
    for (std::size_t c = 0; c < cols; ++c) {
      const double fx = std::clamp((static_cast<double>(c) + 0.5) * sx - 0.5, 0.0,
                                   static_cast<double>(w - 1));
      const auto x0 = static_cast<std::size_t>(std::floor(fx));
      const std::size_t x1 = std::min(x0 + 1, w - 1);
      const double tx = fx - static_cast<double>(x0);
      const double top = at(y0, x0) + tx * (at(y0, x1) - at(y0, x0));
      const double bottom = at(y1, x0) + tx * (at(y1, x1) - at(y1, x0));
      out(r, c) = std::max(0.0, top + ty * (bottom - top));
    }
  }
  return out;
}

PressureImage minmax_normalize(const Grid& grid) {
  if (grid.values.empty()) throw Error("minmax_normalize: empty grid");
  for (double v : grid.values) {
    if (!std::isfinite(v)) throw NumericError("minmax_normalize: non-finite value");
  }
  const auto [lo, hi] = std::minmax_element(grid.values.begin(), grid.values.end());
  PressureImage img;
  img.p_min = *lo;
  img.p_max = *hi;
  img.grid = Grid(grid.rows, grid.cols);
  if (img.p_max > img.p_min) {
    const double range = img.p_max - img.p_min;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      img.grid.values[i] = (grid.values[i] - img.p_min) / range;
    }
  }
  return img;
}

Grid denormalize(const PressureImage& img) {
  Grid out = img.grid;
  const double range = img.p_max - img.p_min;
  for (double& v : out.values) v = v * range + img.p_min;
  return out;
}

PressureImage to_image(const PressureFrameSequence& seq, Aggregation agg) {
  PressureImage img = minmax_normalize(crop_resample(aggregate(seq, agg)));
  img.aggregation = agg;
  img.side = seq.side;
  img.case_id = seq.case_id;
  img.label = seq.label;
  return img;
}

FeatureVector standardize_features(const FeatureVector& v) {
  if (v.values.size() != kFeatureDim) {
    throw ShapeError("standardize_features: expected " + std::to_string(kFeatureDim) +
                     " values, got " + std::to_string(v.values.size()));
  }
  const double n = static_cast<double>(v.values.size());
  double mean = 0.0;
  for (double x : v.values) mean += x;
  mean /= n;
  double var = 0.0;
  for (double x : v.values) var += (x - mean) * (x - mean);
  const double sd = std::sqrt(var / n);
  if (!(sd > kMinFeatureStd)) {
    throw NumericError("standardize_features: feature vector is (near-)constant");
  }
  FeatureVector out{v.values, true};
  for (double& x : out.values) x = (x - mean) / sd;
  return out;
}

}  // namespace preprocess
}  // namespace n2rpp
