#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "n2rpp/nn/params.hpp"
#include "n2rpp/types.hpp"

namespace n2rpp::io {

namespace fs = std::filesystem;

// Shortest decimal text that parses back to the same double.
std::string format_real(double v);

// Sequence file:  "PFS1\n<rows> <cols> <K>\n" then K*rows*cols values,
// frame-major then row-major, one grid row per line. Metadata (side, label,
// case id) lives in the manifest, not in this file.
void write_sequence(std::ostream& out, const PressureFrameSequence& seq);
PressureFrameSequence read_sequence(std::istream& in);
void write_sequence(const fs::path& path, const PressureFrameSequence& seq);
PressureFrameSequence read_sequence(const fs::path& path);

// Image file: "PIMG1\n<rows> <cols> <p_min> <p_max> <side> <label> <aggregation>\n"
// then rows*cols values. The case id comes from the manifest.
void write_image(std::ostream& out, const PressureImage& img);
PressureImage read_image(std::istream& in);
void write_image(const fs::path& path, const PressureImage& img);
PressureImage read_image(const fs::path& path);

// Manifest: one record per line, "<path> <L|R> <healthy|acld> <case_id>
// <raw|max|sum|avg>"; blank lines and '#' comments are skipped. Relative paths
// are resolved against the manifest's directory on read.
struct ManifestEntry {
  fs::path path;
  FootSide side = FootSide::left;
  Label label = Label::healthy;
  std::string case_id;
  Aggregation aggregation = Aggregation::raw;
};

std::vector<ManifestEntry> read_manifest(const fs::path& path);
void write_manifest(const fs::path& path, const std::vector<ManifestEntry>& entries);

// Loads every image of an image manifest, filling case ids from it.
std::vector<PressureImage> load_images(const std::vector<ManifestEntry>& entries);
PressureFrameSequence load_sequence(const ManifestEntry& entry);

// Model file:
//   N2RPP-MODEL\n 1\n <network>\n <count>\n
//   then per parameter "<name> <d0> <d1> ...\n",
//   then all values as little-endian IEEE-754 float32, in header order.
struct ModelFile {
  std::string network;
  nn::NetworkParams params;
};

inline constexpr const char* kModelMagic = "N2RPP-MODEL";

void write_model(std::ostream& out, const ModelFile& model);
ModelFile read_model(std::istream& in);
void write_model(const fs::path& path, const ModelFile& model);
ModelFile read_model(const fs::path& path);
// Throws FormatError if the file holds a different network.
ModelFile read_model(const fs::path& path, const std::string& expected_network);

// rows lines of cols comma-separated values.
void write_grid_csv(const fs::path& path, const Grid& grid);
Grid read_grid_csv(const fs::path& path);

// Plain PGM (P2), maxval 65535; values mapped linearly from [lo, hi], clamped.
inline constexpr int kPgmMaxval = 65535;
void write_pgm(const fs::path& path, const Grid& grid, double lo = 0.0, double hi = 1.0);
Grid read_pgm(const fs::path& path);  // values in [0, maxval]

}  // namespace n2rpp::io
