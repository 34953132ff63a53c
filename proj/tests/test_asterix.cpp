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

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "rtb/asterix.hpp"

namespace rtb {
namespace {

using asterix::CodecError;
using asterix::ErrorCode;

constexpr double kCellDur = 21.7 / kSpeedOfLight;  // 10.85 m cells

VideoMessage fig4a() {
  VideoMessage m;
  m.sac = 25;
  m.sic = 10;
  m.message_id = 0x000102;
  m.time_of_day = 43200.0;
  m.start_az = 0.0;
  m.end_az = asterix::quantize_azimuth(1.0);
  m.center_bias = 0;
  m.cell_dur = asterix::quantize_cell_dur(kCellDur);
  m.cell_res = 8;
  m.n_cells = 5;
  m.cells = {0, 0, 255, 0, 255};
  return m;
}

// Assembled by hand from the CAT-240 item layout.
const std::vector<std::uint8_t> kFig4aBytes = {
    0xF0, 0x00, 0x2A,                    // CAT, LEN = 42
    0xE7, 0xC8,                          // FSPEC: 010 000 020 041 048 FX | 049 050 140
    0x19, 0x0A,                          // SAC 25, SIC 10
    0x02,                                // video message
    0x00, 0x01, 0x02,                    // message index
    0x00, 0x00, 0x00, 0xB6,              // start 0, end 182 LSB
    0x00, 0x00, 0x00, 0x00,              // START_RG
    0x04, 0x50, 0x7B, 0xB1,              // CELL_DUR 72383409 fs
    0x00, 0x04,                          // no compression, 8 bit
    0x00, 0x05, 0x00, 0x00, 0x05,        // NB_VB, NB_CELLS
    0x02,                                // REP
    0x00, 0x00, 0xFF, 0x00, 0xFF, 0x00, 0x00, 0x00,
    0x54, 0x60, 0x00,                    // 43200 s * 128
};

std::vector<std::uint8_t> read_hex(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::uint8_t> out;
  std::string tok;
  while (in >> tok) out.push_back(static_cast<std::uint8_t>(std::stoul(tok, nullptr, 16)));
  return out;
}

TEST(Asterix, GoldenRecord) {
  EXPECT_EQ(asterix::encode(fig4a()), kFig4aBytes);
  EXPECT_EQ(read_hex(RTB_GOLDEN_DIR "/cat240_fig4a.hex"), kFig4aBytes);
  EXPECT_EQ(asterix::decode(kFig4aBytes), fig4a());
}

TEST(Asterix, OneBitCellsPackMsbFirst) {
  VideoMessage m = fig4a();
  m.cell_res = 1;
  m.n_cells = 6;
  m.cells = {0, 0, 1, 0, 1, 0};
  const auto b = asterix::encode(m);
  // FSPEC byte 2, I048 resolution code, then the first video octet.
  EXPECT_EQ(b[24], 1);
  EXPECT_EQ(b[31], 0x28);
  EXPECT_EQ(asterix::decode(b), m);
}

TEST(Asterix, CellLengthOfHeaderDuration) {
  EXPECT_NEAR(cell_length(kCellDur), 10.85, 1e-12);
  VideoMessage m = fig4a();
  m.center_bias = 100;
  const RangeInterval r = cell_range(m, 3);
  EXPECT_NEAR(r.rho_min, 103 * 10.85, 1e-5);
  EXPECT_NEAR(r.rho_max, 104 * 10.85, 1e-5);
}

TEST(Asterix, SpanWrapsAndZeroMeansFullCircle) {
  EXPECT_DOUBLE_EQ(azimuth_span(359.0, 1.0), 2.0);
  EXPECT_DOUBLE_EQ(azimuth_span(10.0, 11.0), 1.0);
  EXPECT_DOUBLE_EQ(azimuth_span(0.0, 0.0), 360.0);
}

VideoMessage random_message(std::mt19937_64& rng) {
  static const std::uint8_t kRes[] = {1, 2, 4, 8, 16, 32};
  std::uniform_int_distribution<std::uint32_t> u32;
  std::uniform_real_distribution<double> az(0, 360), tod(0, 86399), len(0.5, 200);
  VideoMessage m;
  m.sac = static_cast<std::uint8_t>(u32(rng));
  m.sic = static_cast<std::uint8_t>(u32(rng));
  m.message_id = u32(rng) % asterix::kMessageIdModulus;
  m.time_of_day = asterix::quantize_time_of_day(tod(rng));
  m.start_az = asterix::quantize_azimuth(az(rng));
  m.end_az = asterix::quantize_azimuth(az(rng));
  m.center_bias = u32(rng);
  m.cell_dur = asterix::quantize_cell_dur(2 * len(rng) / kSpeedOfLight);
  m.cell_res = kRes[u32(rng) % 6];
  m.n_cells = 1 + u32(rng) % 700;
  const std::uint32_t top = max_strength(m.cell_res);
  m.cells.resize(m.n_cells);
  for (auto& c : m.cells) c = top == 0xFFFFFFFFu ? u32(rng) : u32(rng) % (top + 1);
  return m;
}

TEST(Asterix, RandomRoundTrip) {
  std::mt19937_64 rng(240);
  for (int i = 0; i < 10000; ++i) {
    const VideoMessage m = random_message(rng);
    const auto bytes = asterix::encode(m);
    ASSERT_EQ(bytes.size(), (std::size_t{bytes[1]} << 8) | bytes[2]);
    ASSERT_EQ(asterix::decode(bytes), m) << "iteration " << i;
  }
}

TEST(Asterix, LongCellDurationFallsBackToNanoseconds) {
  VideoMessage m = fig4a();
  m.cell_dur = asterix::quantize_cell_dur(kCellDur * 2048 / 32);
  ASSERT_FALSE(asterix::fits_femto(m.cell_dur));
  const auto b = asterix::encode(m);
  EXPECT_EQ(b[3] & 0x0C, 0x08);  // FRN 5 absent, FRN 6 present
  const VideoMessage back = asterix::decode(b);
  EXPECT_EQ(back, m);
  // half a nanosecond of quantization, times 32 cells
  EXPECT_NEAR(cell_length(back.cell_dur) * 32, 10.85 * 2048, 0.5e-9 * kSpeedOfLight / 2 * 32);
}

TEST(Asterix, BlockChoiceHasLeastPadding) {
  for (std::size_t octets = 1; octets <= 255 * 256; octets += 7) {
    const auto c = asterix::choose_block(octets);
    const std::size_t size = asterix::block_size(c.block_class);
    ASSERT_LE(c.repetitions, 255u);
    ASSERT_GE(c.repetitions * size, octets);
    for (std::size_t s : {4u, 64u, 256u}) {
      const std::size_t rep = (octets + s - 1) / s;
      if (rep <= 255) ASSERT_LE(c.repetitions * size - octets, rep * s - octets);
    }
  }
  EXPECT_THROW(asterix::choose_block(255 * 256 + 1), CodecError);
}

void expect_error(std::vector<std::uint8_t> b, ErrorCode code) {
  try {
    asterix::decode(b);
    FAIL() << "accepted";
  } catch (const CodecError& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

TEST(Asterix, RejectsMalformedRecords) {
  auto b = kFig4aBytes;
  b[0] = 48;
  expect_error(b, ErrorCode::kWrongCategory);
  expect_error({kFig4aBytes.begin(), kFig4aBytes.end() - 1}, ErrorCode::kTruncated);
  b = kFig4aBytes;
  b.push_back(0);
  expect_error(b, ErrorCode::kLengthMismatch);
  b = kFig4aBytes;
  b[3] |= 0x08;  // both header items announced
  expect_error(b, ErrorCode::kMalformed);
  b = kFig4aBytes;
  b[3] &= ~0x04;  // neither
  expect_error(b, ErrorCode::kMalformed);
  b = kFig4aBytes;
  b[24] = 9;  // unknown resolution
  expect_error(b, ErrorCode::kUnknownResolution);
}

TEST(Asterix, EncodeValidates) {
  VideoMessage m = fig4a();
  m.cells[0] = 256;
  EXPECT_THROW(asterix::encode(m), CodecError);
  m = fig4a();
  m.cell_res = 3;
  EXPECT_THROW(asterix::encode(m), CodecError);
  m = fig4a();
  m.n_cells = 0;
  m.cells.clear();
  EXPECT_THROW(asterix::encode(m), CodecError);
  m = fig4a();
  m.message_id = asterix::kMessageIdModulus;
  EXPECT_THROW(asterix::encode(m), CodecError);
}

}  // namespace
}  // namespace rtb
