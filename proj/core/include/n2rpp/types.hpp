#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace n2rpp {

inline constexpr std::size_t kImageRows = 52;
inline constexpr std::size_t kImageCols = 32;
inline constexpr std::size_t kImagePixels = kImageRows * kImageCols;  // 1664
inline constexpr std::size_t kFeatureDim = 128;

enum class FootSide { left, right };
// Healthy is the positive class.
enum class Label { acld = 0, healthy = 1 };
enum class Aggregation { raw, max, sum, avg };

std::string_view to_string(FootSide side);
std::string_view to_string(Label label);
std::string_view to_string(Aggregation agg);
FootSide parse_foot_side(std::string_view text);
Label parse_label(std::string_view text);
Aggregation parse_aggregation(std::string_view text);

inline int label_value(Label l) { return l == Label::healthy ? 1 : 0; }

// Row-major 2-D grid of reals.
struct Grid {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  Grid() = default;
  Grid(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), values(r * c, fill) {}

  double& operator()(std::size_t r, std::size_t c) { return values[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
  std::size_t size() const { return values.size(); }

  bool operator==(const Grid&) const = default;
};

// Raw multi-frame capture of one foot.
struct PressureFrameSequence {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Grid> frames;
  FootSide side = FootSide::left;
  std::string case_id;
  Label label = Label::healthy;

  bool operator==(const PressureFrameSequence&) const = default;
};

// Normalized pressure image with the extrema needed to restore sensor units.
struct PressureImage {
  Grid grid;
  double p_min = 0.0;
  double p_max = 0.0;
  Aggregation aggregation = Aggregation::max;
  FootSide side = FootSide::left;
  std::string case_id;
  Label label = Label::healthy;

  bool operator==(const PressureImage&) const = default;
};

struct FeatureVector {
  std::vector<double> values;
  bool standardized = false;
};

}  // namespace n2rpp
