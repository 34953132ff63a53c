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

#include "rtb/ais.hpp"

#include <cmath>

namespace rtb {
namespace ais {
namespace {

using nmea::ErrorKind;
using nmea::NmeaError;

class BitWriter {
 public:
  void put(std::uint64_t v, int width) {
    for (int i = width - 1; i >= 0; --i) bits_.push_back((v >> i) & 1);
  }
  void put_signed(std::int64_t v, int width) {
    put(static_cast<std::uint64_t>(v) & ((1ull << width) - 1), width);
  }
  void put_text(const std::string& s, int chars) {
    for (int i = 0; i < chars; ++i) {
      char c = i < static_cast<int>(s.size()) ? s[i] : '@';
      if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
      if (c < 0x20 || c > 0x5F) throw NmeaError(ErrorKind::kOutOfRange, "character not in AIS 6-bit set");
      put(c >= 64 ? c - 64 : c, 6);
    }
  }
  const std::vector<bool>& bits() const { return bits_; }

 private:
  std::vector<bool> bits_;
};

class BitReader {
 public:
  explicit BitReader(const std::vector<bool>& b) : b_(b) {}
  std::uint64_t get(int width) {
    if (pos_ + width > b_.size()) throw NmeaError(ErrorKind::kArmoring, "AIS payload too short");
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) v = (v << 1) | b_[pos_++];
    return v;
  }
  std::int64_t get_signed(int width) {
    std::uint64_t v = get(width);
    if (v & (1ull << (width - 1))) return static_cast<std::int64_t>(v) - (1ll << width);
    return static_cast<std::int64_t>(v);
  }
  std::string get_text(int chars) {
    std::string s;
    for (int i = 0; i < chars; ++i) {
      auto v = static_cast<char>(get(6));
      s += v < 32 ? static_cast<char>(v + 64) : v;
    }
    while (!s.empty() && (s.back() == '@' || s.back() == ' ')) s.pop_back();
    return s;
  }

 private:
  const std::vector<bool>& b_;
  std::size_t pos_ = 0;
};

void range_check(bool ok, const char* what) {
  if (!ok) throw NmeaError(ErrorKind::kOutOfRange, what);
}

std::vector<bool> encode_position(const PositionReport& r) {
  range_check(r.message_type >= 1 && r.message_type <= 3, "position report type");
  range_check(r.mmsi < (1u << 30), "mmsi");
  range_check(std::fabs(r.lat) <= 90.0, "latitude");
  range_check(r.lon >= -180.0 && r.lon < 180.0, "longitude");
  range_check(r.sog >= 0.0 && r.sog <= 102.2, "sog");
  range_check(r.cog >= 0.0 && r.cog < 360.0, "cog");
  range_check(r.timestamp_s >= 0 && r.timestamp_s <= 63, "timestamp");
  BitWriter w;
  w.put(r.message_type, 6);
  w.put(0, 2);  // repeat
  w.put(r.mmsi, 30);
  w.put(0, 4);     // under way using engine
  w.put(0x80, 8);  // rate of turn unavailable
  w.put(static_cast<std::uint64_t>(std::llround(r.sog / kSogLsb)), 10);
  w.put(0, 1);
  w.put_signed(std::llround(r.lon / kLatLonLsb), 28);
  w.put_signed(std::llround(r.lat / kLatLonLsb), 27);
  w.put(static_cast<std::uint64_t>(std::llround(r.cog / kCogLsb)) % 3600, 12);
  const long long hdg = std::isfinite(r.heading) ? std::llround(r.heading) % 360 : 511;
  w.put(static_cast<std::uint64_t>(hdg < 0 ? hdg + 360 : hdg), 9);
  w.put(r.timestamp_s, 6);
  w.put(0, 2);   // maneuver
  w.put(0, 3);   // spare
  w.put(0, 1);   // RAIM
  w.put(0, 19);  // radio status
  return w.bits();
}

std::vector<bool> encode_static(const StaticData& r) {
  range_check(r.mmsi < (1u << 30), "mmsi");
  range_check(r.bow >= 0 && r.bow < 512 && r.stern >= 0 && r.stern < 512, "bow/stern");
  range_check(r.port >= 0 && r.port < 64 && r.starboard >= 0 && r.starboard < 64, "port/starboard");
  range_check(r.name.size() <= 20 && r.callsign.size() <= 7, "text length");
  range_check(r.ship_type >= 0 && r.ship_type < 256, "ship type");
  BitWriter w;
  w.put(5, 6);
  w.put(0, 2);
  w.put(r.mmsi, 30);
  w.put(0, 2);   // AIS version
  w.put(0, 30);  // IMO
  w.put_text(r.callsign, 7);
  w.put_text(r.name, 20);
  w.put(r.ship_type, 8);
  w.put(r.bow, 9);
  w.put(r.stern, 9);
  w.put(r.port, 6);
  w.put(r.starboard, 6);
  w.put(1, 4);  // GPS
  w.put(0, 4);  // ETA month
  w.put(0, 5);
  w.put(24, 5);
  w.put(60, 6);
  w.put(0, 8);  // draught
  w.put_text("", 20);
  w.put(0, 1);  // DTE
  w.put(0, 1);
  return w.bits();
}

}  // namespace

Payload armor(const std::vector<bool>& bits) {
  Payload p;
  p.fill_bits = static_cast<int>((6 - bits.size() % 6) % 6);
  const std::size_t chars = (bits.size() + 5) / 6;
  p.armored.reserve(chars);
  for (std::size_t c = 0; c < chars; ++c) {
    int v = 0;
    for (std::size_t i = 0; i < 6; ++i) {
      const std::size_t k = c * 6 + i;
      v = (v << 1) | (k < bits.size() && bits[k] ? 1 : 0);
    }
    p.armored += static_cast<char>(v < 40 ? v + 48 : v + 56);
  }
  return p;
}

std::vector<bool> dearmor(std::string_view armored, int fill_bits) {
  if (fill_bits < 0 || fill_bits > 5) throw NmeaError(ErrorKind::kArmoring, "fill bits out of range");
  std::vector<bool> bits;
  bits.reserve(armored.size() * 6);
  for (char c : armored) {
    int v = c - 48;
    if (v > 40) v -= 8;
    if (c < '0' || c > 'w' || (c > 'W' && c < '`') || v < 0 || v > 63)
      throw NmeaError(ErrorKind::kArmoring, "invalid armoring character");
    for (int i = 5; i >= 0; --i) bits.push_back((v >> i) & 1);
  }
  if (static_cast<std::size_t>(fill_bits) > bits.size())
    throw NmeaError(ErrorKind::kArmoring, "fill bits exceed payload");
  bits.resize(bits.size() - fill_bits);
  return bits;
}

Payload encode_payload(const Report& r) {
  if (auto* p = std::get_if<PositionReport>(&r)) return armor(encode_position(*p));
  return armor(encode_static(std::get<StaticData>(r)));
}

Report decode_payload(const Payload& p) {
  const auto bits = dearmor(p.armored, p.fill_bits);
  BitReader rd(bits);
  const int type = static_cast<int>(rd.get(6));
  if (type >= 1 && type <= 3) {
    PositionReport r;
    r.message_type = type;
    rd.get(2);
    r.mmsi = static_cast<std::uint32_t>(rd.get(30));
    rd.get(4);
    rd.get(8);
    r.sog = rd.get(10) * kSogLsb;
    rd.get(1);
    r.lon = rd.get_signed(28) * kLatLonLsb;
    r.lat = rd.get_signed(27) * kLatLonLsb;
    r.cog = rd.get(12) * kCogLsb;
    const auto hdg = rd.get(9);
    r.heading = hdg == 511 ? std::nan("") : static_cast<double>(hdg);
    r.timestamp_s = static_cast<int>(rd.get(6));
    return r;
  }
  if (type == 5) {
    StaticData r;
    rd.get(2);
    r.mmsi = static_cast<std::uint32_t>(rd.get(30));
    rd.get(2);
    rd.get(30);
    r.callsign = rd.get_text(7);
    r.name = rd.get_text(20);
    r.ship_type = static_cast<int>(rd.get(8));
    r.bow = static_cast<int>(rd.get(9));
    r.stern = static_cast<int>(rd.get(9));
    r.port = static_cast<int>(rd.get(6));
    r.starboard = static_cast<int>(rd.get(6));
    return r;
  }
  throw NmeaError(ErrorKind::kBadField, "unsupported AIS message type " + std::to_string(type));
}

std::vector<nmea::Sentence> encode_vdm(const Report& r, int sequence_id, std::string talker) {
  const Payload p = encode_payload(r);
  const std::size_t parts = (p.armored.size() + kMaxPayloadChars - 1) / kMaxPayloadChars;
  std::vector<nmea::Sentence> out;
  for (std::size_t i = 0; i < parts; ++i) {
    const bool last = i + 1 == parts;
    out.push_back(nmea::make(
        talker, "VDM",
        {std::to_string(parts), std::to_string(i + 1),
         parts > 1 ? std::to_string(sequence_id % 10) : std::string(), "A",
         p.armored.substr(i * kMaxPayloadChars, kMaxPayloadChars),
         std::to_string(last ? p.fill_bits : 0)},
        '!'));
  }
  return out;
}

Report decode_vdm(std::span<const nmea::Sentence> parts) {
  if (parts.empty()) throw NmeaError(ErrorKind::kMissingPart, "no VDM sentences");
  Payload p;
  std::size_t expected = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto& s = parts[i];
    if (!is_vdm(s) || s.fields.size() < 6) throw NmeaError(ErrorKind::kFieldCount, "VDM field count");
    const std::size_t count = static_cast<std::size_t>(nmea::to_int(s.fields[0]));
    const std::size_t number = static_cast<std::size_t>(nmea::to_int(s.fields[1]));
    if (i == 0) expected = count;
    if (count != expected || number != i + 1)
      throw NmeaError(ErrorKind::kMissingPart, "VDM group out of order");
    p.armored += s.fields[4];
    if (i + 1 == parts.size()) p.fill_bits = nmea::to_int(s.fields[5]);
  }
  if (parts.size() != expected) throw NmeaError(ErrorKind::kMissingPart, "incomplete VDM group");
  return decode_payload(p);
}

std::optional<Report> VdmAssembler::push(const nmea::Sentence& s) {
  if (!is_vdm(s) || s.fields.size() < 6) return std::nullopt;
  const int count = nmea::to_int(s.fields[0]);
  const int number = nmea::to_int(s.fields[1]);
  if (count == 1) return decode_vdm(std::span(&s, 1));
  const std::string key = s.fields[2] + s.fields[3];
  auto& group = pending_[key];
  if (number == 1) group.clear();
  if (static_cast<int>(group.size()) + 1 != number) {
    pending_.erase(key);
    return std::nullopt;
  }
  group.push_back(s);
  if (number < count) return std::nullopt;
  auto parts = std::move(group);
  pending_.erase(key);
  return decode_vdm(parts);
}

}  // namespace ais
}  // namespace rtb
