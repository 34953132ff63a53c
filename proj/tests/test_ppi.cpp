// Copyright 2026 The Radar Testbed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <cstdio>
#include <random>

#include "rtb/asterix.hpp"
#include "rtb/ppi.hpp"
#include "rtb/render.hpp"

namespace rtb {
namespace {

constexpr double kCellDur = 72383409e-15;
constexpr double kAz = 10.0;  // inside bin 10

VideoMessage one_bit(std::uint32_t bias, std::vector<std::uint32_t> cells, double az = kAz) {
  VideoMessage m;
  m.sac = 25;
  m.sic = 10;
  m.start_az = az;
  m.end_az = asterix::quantize_azimuth(az + 1.0);
  m.center_bias = bias;
  m.cell_dur = asterix::quantize_cell_dur(kCellDur);
  m.cell_res = 1;
  m.n_cells = static_cast<std::uint32_t>(cells.size());
  m.cells = std::move(cells);
  return m;
}

// Strengths of cells 0..n-1 counted from the antenna.
std::vector<std::uint32_t> trace(const PpiImage& img, std::size_t n, std::size_t bin = 10) {
  const double len = cell_length(asterix::quantize_cell_dur(kCellDur));
  std::vector<std::uint32_t> out;
  for (std::size_t j = 0; j < n; ++j) out.push_back(img.strength_at(bin, (j + 0.5) * len));
  return out;
}

const std::vector<std::uint32_t> k1a{0, 0, 1, 0, 1, 0};
const std::vector<std::uint32_t> k2a{0, 0, 1, 0, 1, 1};

TEST(Ppi, SameGeometrySumsCells) {
  PpiImage img;
  img.apply(one_bit(0, k1a), 0);
  img.apply(one_bit(0, k2a), 1000);
  EXPECT_EQ(trace(img, 6), (std::vector<std::uint32_t>{0, 0, 1, 0, 1, 1}));
}

TEST(Ppi, ShiftedMessageReplacesTraceWithQuirk) {
  PpiImage img;
  img.apply(one_bit(0, k1a), 0);
  img.apply(one_bit(4, {1, 1}), 1000);
  // the echo in the third cell is gone
  EXPECT_EQ(trace(img, 6), (std::vector<std::uint32_t>{0, 0, 0, 0, 1, 1}));
  EXPECT_EQ(img.bin(10).geometry.center_bias, 4u);
}

TEST(Ppi, ShiftedMessageMergesWithoutQuirk) {
  PpiConfig c;
  c.quirk = false;
  PpiImage img(c);
  img.apply(one_bit(0, k1a), 0);
  img.apply(one_bit(4, {1, 1}), 1000);
  EXPECT_EQ(trace(img, 6), (std::vector<std::uint32_t>{0, 0, 1, 0, 1, 1}));
}

TEST(Ppi, OneBitSumIsOr) {
  for (unsigned a = 0; a < 64; ++a) {
    for (unsigned b = 0; b < 64; ++b) {
      std::vector<std::uint32_t> ca(6), cb(6);
      for (int j = 0; j < 6; ++j) {
        ca[j] = (a >> j) & 1u;
        cb[j] = (b >> j) & 1u;
      }
      PpiImage img;
      img.apply(one_bit(0, ca), 0);
      img.apply(one_bit(0, cb), 10);
      const auto t = trace(img, 6);
      for (int j = 0; j < 6; ++j) ASSERT_EQ(t[j], ((a | b) >> j) & 1u) << a << " " << b;
    }
  }
}

TEST(Ppi, ApplicationOrderDoesNotMatter) {
  std::mt19937 rng(3);
  std::uniform_int_distribution<std::uint32_t> v(0, 255), bias(0, 6);
  for (bool quirk : {true, false}) {
    PpiConfig c;
    c.quirk = quirk;
    for (int i = 0; i < 500; ++i) {
      VideoMessage a = one_bit(0, std::vector<std::uint32_t>(8)), b = a;
      a.cell_res = b.cell_res = 8;
      for (auto& x : a.cells) x = v(rng);
      for (auto& x : b.cells) x = v(rng);
      if (!quirk) b.center_bias = bias(rng);
      PpiImage ab(c), ba(c);
      ab.apply(a, 0);
      ab.apply(b, 5);
      ba.apply(b, 0);
      ba.apply(a, 5);
      ASSERT_EQ(trace(ab, 16), trace(ba, 16)) << "quirk " << quirk << " case " << i;
    }
  }
}

TEST(Ppi, StaleBinIsReplaced) {
  PpiImage img;
  EXPECT_EQ(img.persistence(), 1250000);
  img.apply(one_bit(0, k1a), 0);
  img.apply(one_bit(0, {0, 0, 0, 0, 0, 1}), img.persistence() - 1);
  EXPECT_EQ(trace(img, 6), k2a);
  const Micros t = 2 * img.persistence();
  img.apply(one_bit(0, {1, 0, 0, 0, 0, 0}), t);
  EXPECT_EQ(trace(img, 6), (std::vector<std::uint32_t>{1, 0, 0, 0, 0, 0}));
}

TEST(Ppi, BinsForSpan) {
  PpiImage img;
  EXPECT_EQ(img.n_bins(), 360u);
  EXPECT_EQ(img.bins_for(10.0, 1.0), std::vector<std::size_t>{10});
  EXPECT_EQ(img.bins_for(359.2, 1.0), std::vector<std::size_t>{359});
  EXPECT_EQ(img.bins_for(359.6, 1.0), std::vector<std::size_t>{0});
  EXPECT_EQ(img.bins_for(20.0, 3.0), (std::vector<std::size_t>{20, 21, 22}));
  EXPECT_EQ(img.bins_for(0.0, 360.0).size(), 360u);
  // a sliver between centres still lands somewhere
  EXPECT_EQ(img.bins_for(10.6, 0.2), std::vector<std::size_t>{10});
}

TEST(Ppi, HashTracksContent) {
  PpiImage a, b;
  EXPECT_EQ(a.hash(), b.hash());
  a.apply(one_bit(0, k1a), 0);
  EXPECT_NE(a.hash(), b.hash());
  b.apply(one_bit(0, k1a), 0);
  EXPECT_EQ(a.hash(), b.hash());
}

// Full strength over bins 85..95, i.e. to starboard in head-up.
PpiImage beam_east() {
  PpiImage img;
  VideoMessage m = one_bit(0, std::vector<std::uint32_t>(2048, 255), 85.0);
  m.cell_res = 8;
  m.end_az = asterix::quantize_azimuth(96.0);
  img.apply(m, 0);
  return img;
}

bool lit(const Frame& f, int x, int y) {
  const std::uint8_t* p = f.pixel(x, y);
  return p[1] > 200 && p[0] < 60;
}

TEST(Render, EchoLandsOnBearing) {
  PpiImage img = beam_east();
  img.set_heading(90.0);
  RenderOptions o;
  o.size = 64;
  const Frame head_up = render(img, o);
  EXPECT_TRUE(lit(head_up, 32 + 14, 31));
  EXPECT_FALSE(lit(head_up, 32 - 15, 31));
  EXPECT_FALSE(lit(head_up, 31, 32 + 14));
  o.mode = Orientation::kNorthUp;
  const Frame north_up = render(img, o);
  // relative 90 with heading 90 is due south
  EXPECT_TRUE(lit(north_up, 31, 32 + 14));
  EXPECT_FALSE(lit(north_up, 32 + 14, 31));
}

TEST(Render, PpmRoundTrip) {
  RenderOptions o;
  o.size = 48;
  const Frame f = render(beam_east(), o);
  const auto ppm = to_ppm(f);
  const std::string head = "P6\n48 48\n255\n";
  ASSERT_EQ(ppm.size(), head.size() + 48 * 48 * 3);
  EXPECT_EQ(std::string(ppm.begin(), ppm.begin() + head.size()), head);
  const std::string path = testing::TempDir() + "rtb_round_trip.ppm";
  write_ppm(f, path);
  const Frame back = read_ppm(path);
  std::remove(path.c_str());
  EXPECT_EQ(back.size, 48);
  EXPECT_EQ(back.rgb, f.rgb);
}

}  // namespace
}  // namespace rtb
