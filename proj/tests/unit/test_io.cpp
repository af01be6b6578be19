#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "fixtures.hpp"
#include "n2rpp/autoencoder.hpp"
#include "n2rpp/error.hpp"
#include "n2rpp/io.hpp"
#include "oracles.hpp"
#include "temp_dir.hpp"

namespace n2rpp::io {
namespace {

using testing_util::slurp;
using testing_util::TempDir;

TEST(FormatReal, RoundTrips) {
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double v = rng.normal(0.0, std::pow(10.0, rng.uniform(-8.0, 8.0)));
    EXPECT_EQ(std::stod(format_real(v)), v);
  }
  EXPECT_EQ(format_real(0.5), "0.5");
  EXPECT_EQ(format_real(3.0), "3");
}

TEST(Sequence, RoundTrip) {
  synth::FootParams p;
  p.rows = 20;
  p.cols = 14;
  p.frames = 3;
  const auto seq = generate_foot(p);
  std::stringstream ss;
  write_sequence(ss, seq);
  EXPECT_EQ(ss.str().rfind("PFS1\n20 14 3\n", 0), 0u);
  const auto back = read_sequence(ss);
  EXPECT_EQ(back.frames, seq.frames);
  EXPECT_EQ(back.rows, 20u);
  EXPECT_EQ(back.cols, 14u);
}

TEST(Sequence, RejectsMalformed) {
  for (const char* text : {"PFS2\n1 1 1\n1\n", "PFS1\n2 2 1\n1 2 3\n", "PFS1\n1 1 1\nx\n", "PFS1\n0 1 1\n"}) {
    std::stringstream ss(text);
    EXPECT_THROW(read_sequence(ss), FormatError) << text;
  }
}

TEST(Image, RoundTrip) {
  auto img = fixture::cohort_images(1, 1, 3)[1];
  img.side = FootSide::right;
  std::stringstream ss;
  write_image(ss, img);
  const auto back = read_image(ss);
  EXPECT_EQ(back.grid, img.grid);
  EXPECT_EQ(back.p_min, img.p_min);
  EXPECT_EQ(back.p_max, img.p_max);
  EXPECT_EQ(back.side, FootSide::right);
  EXPECT_EQ(back.label, Label::acld);
  EXPECT_EQ(back.aggregation, img.aggregation);
}

TEST(Manifest, RoundTripAndResolution) {
  TempDir dir;
  std::filesystem::create_directories(dir / "seq");
  synth::FootParams p;
  p.rows = 10;
  p.cols = 8;
  write_sequence(dir / "seq/a.pfs", generate_foot(p));
  write_sequence(dir / "seq/b.pfs", generate_foot(p));
  const std::vector<ManifestEntry> entries{
      {"seq/a.pfs", FootSide::left, Label::healthy, "H1", Aggregation::raw},
      {"seq/b.pfs", FootSide::right, Label::acld, "A1", Aggregation::raw}};
  write_manifest(dir / "manifest.txt", entries);
  {
    std::ofstream app(dir / "manifest.txt", std::ios::app);
    app << "# trailing comment\n\n";
  }
  const auto back = read_manifest(dir / "manifest.txt");
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].path, dir / "seq/a.pfs");
  EXPECT_EQ(back[1].side, FootSide::right);
  EXPECT_EQ(back[1].label, Label::acld);
  EXPECT_EQ(back[1].case_id, "A1");
  const auto seq = load_sequence(back[1]);
  EXPECT_EQ(seq.case_id, "A1");
  EXPECT_EQ(seq.side, FootSide::right);
  EXPECT_EQ(seq.label, Label::acld);
}

TEST(Manifest, RejectsMissingFilesAndBadFields) {
  TempDir dir;
  std::ofstream(dir / "m1.txt") << "missing.pfs L healthy H1 raw\n";
  EXPECT_THROW(read_manifest(dir / "m1.txt"), Error);
  std::ofstream(dir / "x.pfs") << "PFS1\n1 1 1\n1\n";
  std::ofstream(dir / "m2.txt") << "x.pfs L sick H1 raw\n";
  EXPECT_THROW(read_manifest(dir / "m2.txt"), Error);
  std::ofstream(dir / "m3.txt") << "x.pfs Q healthy H1 raw\n";
  EXPECT_THROW(read_manifest(dir / "m3.txt"), Error);
  std::ofstream(dir / "m4.txt") << "x.pfs L healthy H1\n";
  EXPECT_THROW(read_manifest(dir / "m4.txt"), Error);
}

ModelFile sample_model() {
  return {"ae", ae::make_autoencoder_network(5, {20, 6}).params()};
}

TEST(Model, RoundTripsAtFloatPrecision) {
  const ModelFile m = sample_model();
  std::stringstream first;
  write_model(first, m);
  const std::string bytes = first.str();
  EXPECT_EQ(bytes.rfind("N2RPP-MODEL\n1\nae\n4\nenc.weight 20 6\nenc.bias 6\ndec.weight 6 20\ndec.bias 20\n", 0), 0u);
  EXPECT_EQ(bytes.size(), bytes.find("dec.bias 20\n") + 12 + 4 * m.params.scalar_count());

  std::stringstream in(bytes);
  const ModelFile back = read_model(in);
  EXPECT_EQ(back.network, "ae");
  ASSERT_TRUE(back.params.same_layout(m.params));
  for (std::size_t p = 0; p < m.params.size(); ++p)
    for (std::size_t i = 0; i < m.params[p].tensor.size(); ++i)
      EXPECT_EQ(back.params[p].tensor[i], static_cast<double>(static_cast<float>(m.params[p].tensor[i])));

  std::stringstream second;
  write_model(second, back);
  EXPECT_EQ(second.str(), bytes);
}

TEST(Model, BinaryIsLittleEndianFloat32) {
  nn::NetworkParams p;
  p.add("w", Tensor({2}, {1.0, -2.5}));
  std::stringstream ss;
  write_model(ss, {"clf", p});
  const std::string s = ss.str();
  const std::string tail = s.substr(s.size() - 8);
  const unsigned char want[8] = {0x00, 0x00, 0x80, 0x3f, 0x00, 0x00, 0x20, 0xc0};
  for (int i = 0; i < 8; ++i) EXPECT_EQ(static_cast<unsigned char>(tail[i]), want[i]) << i;
}

TEST(Model, RejectsCorruptFiles) {
  std::stringstream ss;
  write_model(ss, sample_model());
  const std::string good = ss.str();
  auto expect_bad = [](const std::string& text) {
    std::stringstream in(text);
    EXPECT_THROW(read_model(in), FormatError);
  };
  expect_bad(good.substr(0, good.size() - 1));
  expect_bad(good + "x");
  expect_bad("N2RPP-MODEX" + good.substr(11));
  std::string v2 = good;
  v2[12] = '2';
  expect_bad(v2);
  std::string count = good;
  count.replace(count.find("\n4\n"), 3, "\n5\n");
  expect_bad(count);
}

TEST(Model, ExpectedNetworkEnforced) {
  TempDir dir;
  write_model(dir / "m.bin", sample_model());
  EXPECT_NO_THROW(read_model(dir / "m.bin", "ae"));
  EXPECT_THROW(read_model(dir / "m.bin", "gen"), FormatError);
  const std::string bytes = slurp(dir / "m.bin");
  write_model(dir / "m2.bin", read_model(dir / "m.bin"));
  EXPECT_EQ(slurp(dir / "m2.bin"), bytes);
}

TEST(Model, RejectsNonFiniteParameters) {
  nn::NetworkParams p;
  p.add("w", Tensor({1}, {std::numeric_limits<double>::infinity()}));
  std::stringstream ss;
  EXPECT_THROW(write_model(ss, {"ae", p}), Error);
}

TEST(GridCsv, RoundTrip) {
  TempDir dir;
  Rng rng(3);
  Grid g(5, 4);
  for (double& v : g.values) v = rng.uniform(-1.0, 1.0);
  write_grid_csv(dir / "g.csv", g);
  EXPECT_EQ(read_grid_csv(dir / "g.csv"), g);
  const std::string text = slurp(dir / "g.csv");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 5);
  EXPECT_EQ(std::count(text.begin(), text.end(), ','), 5 * 3);
}

TEST(Pgm, HeaderAndScaling) {
  TempDir dir;
  Grid g(2, 3);
  g.values = {0.0, 0.5, 1.0, -1.0, 2.0, 0.25};
  write_pgm(dir / "g.pgm", g);
  EXPECT_EQ(slurp(dir / "g.pgm").rfind("P2\n3 2\n65535\n", 0), 0u);
  const Grid back = read_pgm(dir / "g.pgm");
  ASSERT_EQ(back.rows, 2u);
  ASSERT_EQ(back.cols, 3u);
  EXPECT_EQ(back.values, (std::vector<double>{0, 32768, 65535, 0, 65535, 16384}));
}

}  // namespace
}  // namespace n2rpp::io
