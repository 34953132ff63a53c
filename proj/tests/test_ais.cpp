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
#include <random>

#include "rtb/ais.hpp"

namespace rtb {
namespace {

// Six-bit de-armoring written out from the table in ITU-R M.1371 / IEC 61162.
std::vector<int> sixbits(const std::string& armored) {
  std::vector<int> out;
  for (char c : armored) {
    int v = c - 48;
    if (v > 40) v -= 8;
    out.push_back(v);
  }
  return out;
}

std::uint64_t field(const std::vector<int>& six, int start, int width) {
  std::uint64_t v = 0;
  for (int i = start; i < start + width; ++i) v = (v << 1) | ((six[i / 6] >> (5 - i % 6)) & 1);
  return v;
}

std::int64_t sfield(const std::vector<int>& six, int start, int width) {
  const std::uint64_t v = field(six, start, width);
  return (v >> (width - 1)) & 1 ? static_cast<std::int64_t>(v) - (1ll << width)
                                : static_cast<std::int64_t>(v);
}

TEST(Ais, PositionReportBitLayout) {
  ais::PositionReport p;
  p.mmsi = 247123456;
  p.lat = 44.4;
  p.lon = -8.9;
  p.sog = 10.3;
  p.cog = 271.4;
  p.heading = 270;
  p.timestamp_s = 42;
  const ais::Payload pl = ais::encode_payload(p);
  EXPECT_EQ(pl.armored.size(), 28u);  // 168 bits
  EXPECT_EQ(pl.fill_bits, 0);
  const auto six = sixbits(pl.armored);
  EXPECT_EQ(field(six, 0, 6), 1u);
  EXPECT_EQ(field(six, 8, 30), 247123456u);
  EXPECT_EQ(field(six, 50, 10), 103u);
  EXPECT_EQ(sfield(six, 61, 28), std::llround(-8.9 * 600000));
  EXPECT_EQ(sfield(six, 89, 27), std::llround(44.4 * 600000));
  EXPECT_EQ(field(six, 116, 12), 2714u);
  EXPECT_EQ(field(six, 128, 9), 270u);
  EXPECT_EQ(field(six, 137, 6), 42u);
}

TEST(Ais, StaticReportSpansTwoSentences) {
  ais::StaticData s;
  s.mmsi = 247200000;
  s.name = "OVERTAKEN";
  s.callsign = "IABC1";
  s.bow = 72;
  s.stern = 48;
  s.port = 10;
  s.starboard = 10;
  const auto parts = ais::encode_vdm(s, 3);
  ASSERT_EQ(parts.size(), 2u);
  ais::VdmAssembler asm_;
  EXPECT_FALSE(asm_.push(parts[0]).has_value());
  const auto r = asm_.push(parts[1]);
  ASSERT_TRUE(r.has_value());
  const auto& back = std::get<ais::StaticData>(*r);
  EXPECT_EQ(back.mmsi, s.mmsi);
  EXPECT_EQ(back.name, s.name);
  EXPECT_EQ(back.callsign, s.callsign);
  EXPECT_EQ(back.length(), 120);
  EXPECT_EQ(back.width(), 20);
  // Dimension fields sit at bits 240.. of message 5.
  std::string armored;
  for (const auto& p : parts) armored += p.fields[4];
  const auto six = sixbits(armored);
  EXPECT_EQ(field(six, 0, 6), 5u);
  EXPECT_EQ(field(six, 240, 9), 72u);
  EXPECT_EQ(field(six, 249, 9), 48u);
  EXPECT_EQ(field(six, 258, 6), 10u);
  EXPECT_EQ(field(six, 264, 6), 10u);
}

TEST(Ais, ArmorIsInverse) {
  std::mt19937_64 rng(61);
  for (int n = 1; n < 200; ++n) {
    std::vector<bool> bits(n);
    for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = rng() & 1;
    const ais::Payload p = ais::armor(bits);
    ASSERT_EQ(ais::dearmor(p.armored, p.fill_bits), bits);
  }
}

TEST(Ais, RandomReportsRoundTripWithinLsb) {
  std::mt19937_64 rng(1371);
  std::uniform_real_distribution<double> lat(-89, 89), lon(-179.9, 179.9), sog(0, 102),
      cog(0, 359.9);
  std::uniform_int_distribution<std::uint32_t> mmsi(200000000, 799999999);
  std::uniform_int_distribution<int> hdg(0, 359), ts(0, 59);
  for (int i = 0; i < 10000; ++i) {
    if (i % 5 == 4) {
      ais::StaticData s;
      s.mmsi = mmsi(rng);
      s.name = "SHIP " + std::to_string(i);
      s.callsign = "C" + std::to_string(i % 1000);
      s.bow = i % 400;
      s.stern = (i * 7) % 400;
      s.port = i % 60;
      s.starboard = (i * 3) % 60;
      const auto parts = ais::encode_vdm(s, i % 10);
      const auto back = std::get<ais::StaticData>(ais::decode_vdm(parts));
      ASSERT_EQ(back.mmsi, s.mmsi);
      ASSERT_EQ(back.name, s.name);
      ASSERT_EQ(back.bow, s.bow);
      ASSERT_EQ(back.starboard, s.starboard);
      continue;
    }
    ais::PositionReport p;
    p.mmsi = mmsi(rng);
    p.lat = lat(rng);
    p.lon = lon(rng);
    p.sog = sog(rng);
    p.cog = cog(rng);
    p.heading = hdg(rng);
    p.timestamp_s = ts(rng);
    const auto parts = ais::encode_vdm(p);
    ASSERT_EQ(parts.size(), 1u);
    const auto line = nmea::serialize(parts[0]);
    const auto back =
        std::get<ais::PositionReport>(ais::decode_vdm(std::vector{nmea::parse(line)}));
    ASSERT_EQ(back.mmsi, p.mmsi);
    ASSERT_NEAR(back.lat, p.lat, ais::kLatLonLsb / 2 + 1e-12);
    ASSERT_NEAR(back.lon, p.lon, ais::kLatLonLsb / 2 + 1e-12);
    ASSERT_NEAR(back.sog, p.sog, ais::kSogLsb / 2 + 1e-9);
    ASSERT_NEAR(back.cog, p.cog, ais::kCogLsb / 2 + 1e-9);
    ASSERT_DOUBLE_EQ(back.heading, p.heading);
    ASSERT_EQ(back.timestamp_s, p.timestamp_s);
  }
}

}  // namespace
}  // namespace rtb
