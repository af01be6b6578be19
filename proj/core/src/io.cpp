#include "n2rpp/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "n2rpp/error.hpp"

namespace n2rpp::io {
namespace {

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, mode | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  return out;
}

std::ifstream open_in(const fs::path& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  if (!in) throw Error("cannot read '" + path.string() + "'");
  return in;
}

void close_out(std::ofstream& out, const fs::path& path) {
  out.close();
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

std::string next_token(std::istream& in, const char* what) {
  std::string tok;
  if (!(in >> tok)) throw FormatError(std::string("unexpected end of data reading ") + what);
  return tok;
}

double parse_real(const std::string& tok, const char* what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw FormatError(std::string("bad number '") + tok + "' in " + what);
  }
  return v;
}

std::size_t parse_count(const std::string& tok, const char* what) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw FormatError(std::string("bad count '") + tok + "' in " + what);
  }
  return v;
}

void write_rows(std::ostream& out, const Grid& g, char sep) {
  std::string line;
  for (std::size_t r = 0; r < g.rows; ++r) {
    line.clear();
    for (std::size_t c = 0; c < g.cols; ++c) {
      if (c) line += sep;
      line += format_real(g(r, c));
    }
    line += '\n';
    out << line;
  }
}

void expect_line(std::istream& in, const std::string& expected, const char* what) {
  std::string line;
  std::getline(in, line);
  if (line != expected) {
    throw FormatError(std::string(what) + ": expected '" + expected + "', got '" + line + "'");
  }
}

}  // namespace

std::string format_real(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw FormatError("cannot format number");
  return std::string(buf, ptr);
}

void write_sequence(std::ostream& out, const PressureFrameSequence& seq) {
  out << "PFS1\n" << seq.rows << ' ' << seq.cols << ' ' << seq.frames.size() << '\n';
  for (const Grid& f : seq.frames) write_rows(out, f, ' ');
}

PressureFrameSequence read_sequence(std::istream& in) {
  expect_line(in, "PFS1", "sequence header");
  PressureFrameSequence seq;
  seq.rows = parse_count(next_token(in, "rows"), "sequence header");
  seq.cols = parse_count(next_token(in, "cols"), "sequence header");
  const std::size_t k = parse_count(next_token(in, "frames"), "sequence header");
  if (seq.rows == 0 || seq.cols == 0 || k == 0) throw FormatError("sequence header has a zero size");
  for (std::size_t f = 0; f < k; ++f) {
    Grid g(seq.rows, seq.cols);
    for (double& v : g.values) v = parse_real(next_token(in, "sequence values"), "sequence values");
    seq.frames.push_back(std::move(g));
  }
  std::string extra;
  if (in >> extra) throw FormatError("trailing data after sequence values");
  return seq;
}

void write_sequence(const fs::path& path, const PressureFrameSequence& seq) {
  auto out = open_out(path);
  write_sequence(out, seq);
  close_out(out, path);
}

PressureFrameSequence read_sequence(const fs::path& path) {
  auto in = open_in(path);
  try {
    return read_sequence(in);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_image(std::ostream& out, const PressureImage& img) {
  out << "PIMG1\n"
      << img.grid.rows << ' ' << img.grid.cols << ' ' << format_real(img.p_min) << ' '
      << format_real(img.p_max) << ' ' << to_string(img.side) << ' ' << to_string(img.label) << ' '
      << to_string(img.aggregation) << '\n';
  write_rows(out, img.grid, ' ');
}

PressureImage read_image(std::istream& in) {
  expect_line(in, "PIMG1", "image header");
  PressureImage img;
  const std::size_t rows = parse_count(next_token(in, "rows"), "image header");
  const std::size_t cols = parse_count(next_token(in, "cols"), "image header");
  img.p_min = parse_real(next_token(in, "p_min"), "image header");
  img.p_max = parse_real(next_token(in, "p_max"), "image header");
  img.side = parse_foot_side(next_token(in, "side"));
  img.label = parse_label(next_token(in, "label"));
  img.aggregation = parse_aggregation(next_token(in, "aggregation"));
  if (rows == 0 || cols == 0) throw FormatError("image header has a zero size");
  if (img.p_min > img.p_max) throw FormatError("image header has p_min > p_max");
  img.grid = Grid(rows, cols);
  for (double& v : img.grid.values) v = parse_real(next_token(in, "image values"), "image values");
  std::string extra;
  if (in >> extra) throw FormatError("trailing data after image values");
  return img;
}

void write_image(const fs::path& path, const PressureImage& img) {
  auto out = open_out(path);
  write_image(out, img);
  close_out(out, path);
}

PressureImage read_image(const fs::path& path) {
  auto in = open_in(path);
  try {
    return read_image(in);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::vector<ManifestEntry> read_manifest(const fs::path& path) {
  auto in = open_in(path);
  const fs::path base = path.parent_path();
  std::vector<ManifestEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string p, side, label, id, agg, extra;
    if (!(fields >> p)) continue;
    if (!(fields >> side >> label >> id >> agg) || (fields >> extra)) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) +
                        ": expected '<path> <side> <label> <case_id> <aggregation>'");
    }
    ManifestEntry e;
    e.path = fs::path(p).is_absolute() ? fs::path(p) : base / p;
    try {
      e.side = parse_foot_side(side);
      e.label = parse_label(label);
      e.aggregation = parse_aggregation(agg);
    } catch (const FormatError& err) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": " + err.what());
    }
    e.case_id = id;
    if (!fs::exists(e.path)) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": missing file '" +
                        e.path.string() + "'");
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

void write_manifest(const fs::path& path, const std::vector<ManifestEntry>& entries) {
  auto out = open_out(path);
  for (const auto& e : entries) {
    out << e.path.generic_string() << ' ' << to_string(e.side) << ' ' << to_string(e.label) << ' '
        << e.case_id << ' ' << to_string(e.aggregation) << '\n';
  }
  close_out(out, path);
}

std::vector<PressureImage> load_images(const std::vector<ManifestEntry>& entries) {
  std::vector<PressureImage> images;
  images.reserve(entries.size());
  for (const auto& e : entries) {
    if (e.aggregation == Aggregation::raw) {
      throw FormatError("'" + e.path.string() + "' is a raw sequence, not an image");
    }
    PressureImage img = read_image(e.path);
    img.case_id = e.case_id;
    img.side = e.side;
    img.label = e.label;
    images.push_back(std::move(img));
  }
  return images;
}

PressureFrameSequence load_sequence(const ManifestEntry& entry) {
  PressureFrameSequence seq = read_sequence(entry.path);
  seq.side = entry.side;
  seq.label = entry.label;
  seq.case_id = entry.case_id;
  return seq;
}

void write_model(std::ostream& out, const ModelFile& model) {
  for (const auto& p : model.params) {
    for (double v : p.tensor.values()) {
      if (!std::isfinite(static_cast<float>(v))) {
        throw NumericError("parameter '" + p.name + "' is not representable as a finite float32");
      }
    }
  }
  out << kModelMagic << "\n1\n" << model.network << '\n' << model.params.size() << '\n';
  for (const auto& p : model.params) {
    if (p.name.empty() || p.name.find_first_of(" \t\n") != std::string::npos) {
      throw FormatError("parameter names must be non-empty without whitespace");
    }
    out << p.name;
    for (std::size_t d : p.tensor.shape()) out << ' ' << d;
    out << '\n';
  }
  std::string bytes;
  bytes.reserve(model.params.scalar_count() * 4);
  for (const auto& p : model.params) {
    for (double v : p.tensor.values()) {
      auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(v));
      if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap32(bits);
      char b[4];
      std::memcpy(b, &bits, 4);
      bytes.append(b, 4);
    }
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

ModelFile read_model(std::istream& in) {
  expect_line(in, kModelMagic, "model magic");
  expect_line(in, "1", "model format version");
  ModelFile model;
  std::getline(in, model.network);
  if (model.network.empty()) throw FormatError("model file has no network name");
  std::string line;
  std::getline(in, line);
  const std::size_t count = parse_count(line, "parameter count");

  std::vector<std::pair<std::string, Shape>> header;
  for (std::size_t i = 0; i < count; ++i) {
    if (!std::getline(in, line)) throw FormatError("model header ends early");
    std::istringstream fields(line);
    std::string name, dim;
    fields >> name;
    Shape shape;
    while (fields >> dim) shape.push_back(parse_count(dim, "parameter shape"));
    if (name.empty() || shape.empty()) throw FormatError("bad parameter line '" + line + "'");
    header.emplace_back(std::move(name), std::move(shape));
  }
  for (auto& [name, shape] : header) {
    std::vector<double> values(shape_size(shape));
    for (double& v : values) {
      char b[4];
      if (!in.read(b, 4)) throw FormatError("model binary section is shorter than its header declares");
      std::uint32_t bits;
      std::memcpy(&bits, b, 4);
      if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap32(bits);
      v = static_cast<double>(std::bit_cast<float>(bits));
    }
    model.params.add(name, Tensor(shape, std::move(values)));
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw FormatError("model binary section is longer than its header declares");
  }
  return model;
}

void write_model(const fs::path& path, const ModelFile& model) {
  auto out = open_out(path, std::ios::out | std::ios::binary);
  write_model(out, model);
  close_out(out, path);
}

ModelFile read_model(const fs::path& path) {
  auto in = open_in(path, std::ios::in | std::ios::binary);
  try {
    return read_model(in);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

ModelFile read_model(const fs::path& path, const std::string& expected_network) {
  ModelFile m = read_model(path);
  if (m.network != expected_network) {
    throw FormatError(path.string() + ": expected a '" + expected_network + "' model, found '" +
                      m.network + "'");
  }
  return m;
}

void write_grid_csv(const fs::path& path, const Grid& grid) {
  auto out = open_out(path);
  write_rows(out, grid, ',');
  close_out(out, path);
}

Grid read_grid_csv(const fs::path& path) {
  auto in = open_in(path);
  Grid g;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string cell;
    std::size_t cols = 0;
    while (std::getline(fields, cell, ',')) {
      g.values.push_back(parse_real(cell, "csv grid"));
      ++cols;
    }
    if (g.rows == 0) g.cols = cols;
    if (cols != g.cols) throw FormatError(path.string() + ": ragged csv row");
    ++g.rows;
  }
  return g;
}

void write_pgm(const fs::path& path, const Grid& grid, double lo, double hi) {
  auto out = open_out(path);
  out << "P2\n" << grid.cols << ' ' << grid.rows << '\n' << kPgmMaxval << '\n';
  const double range = hi > lo ? hi - lo : 1.0;
  std::string line;
  for (std::size_t r = 0; r < grid.rows; ++r) {
    line.clear();
    for (std::size_t c = 0; c < grid.cols; ++c) {
      const double t = std::clamp((grid(r, c) - lo) / range, 0.0, 1.0);
      if (c) line += ' ';
      line += std::to_string(static_cast<int>(std::lround(t * kPgmMaxval)));
    }
    line += '\n';
    out << line;
  }
  close_out(out, path);
}

Grid read_pgm(const fs::path& path) {
  auto in = open_in(path);
  if (next_token(in, "pgm magic") != "P2") throw FormatError(path.string() + ": not a P2 PGM");
  const std::size_t cols = parse_count(next_token(in, "pgm width"), "pgm header");
  const std::size_t rows = parse_count(next_token(in, "pgm height"), "pgm header");
  const std::size_t maxval = parse_count(next_token(in, "pgm maxval"), "pgm header");
  if (maxval == 0 || maxval > 65535) throw FormatError(path.string() + ": bad PGM maxval");
  Grid g(rows, cols);
  for (double& v : g.values) {
    const std::size_t px = parse_count(next_token(in, "pgm pixel"), "pgm pixels");
    if (px > maxval) throw FormatError(path.string() + ": pixel exceeds maxval");
    v = static_cast<double>(px);
  }
  return g;
}

}  // namespace n2rpp::io
