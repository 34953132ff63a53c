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

#ifndef RTB_AIS_HPP_
#define RTB_AIS_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rtb/nmea.hpp"

namespace rtb {
namespace ais {

inline constexpr double kLatLonLsb = 1.0 / 600000.0;  // degrees (1/10000 min)
inline constexpr double kSogLsb = 0.1;
inline constexpr double kCogLsb = 0.1;
inline constexpr std::size_t kMaxPayloadChars = 60;

struct PositionReport {
  int message_type = 1;  // 1, 2 or 3
  std::uint32_t mmsi = 0;
  double lat = 0.0;
  double lon = 0.0;
  double sog = 0.0;      // knots
  double cog = 0.0;      // degrees
  double heading = 0.0;  // degrees, whole on the wire
  int timestamp_s = 0;   // UTC second 0..59, 60 when unavailable
};

struct StaticData {
  std::uint32_t mmsi = 0;
  std::string name;
  std::string callsign;
  int ship_type = 70;
  int bow = 0;  // meters
  int stern = 0;
  int port = 0;
  int starboard = 0;

  double width() const { return port + starboard; }
  double length() const { return bow + stern; }
};

using Report = std::variant<PositionReport, StaticData>;

// 6-bit payload plus fill bits.
struct Payload {
  std::string armored;
  int fill_bits = 0;
};

Payload armor(const std::vector<bool>& bits);
std::vector<bool> dearmor(std::string_view armored, int fill_bits);

// Throws NmeaError(kOutOfRange) for fields the wire cannot carry.
Payload encode_payload(const Report& r);
Report decode_payload(const Payload& p);

// One or more !AIVDM sentences on channel A; `sequence_id` tags
// multi-sentence groups (0..9).
std::vector<nmea::Sentence> encode_vdm(const Report& r, int sequence_id = 0,
                                       std::string talker = "AI");
Report decode_vdm(std::span<const nmea::Sentence> parts);

// Stream reassembly of multi-sentence groups.
class VdmAssembler {
 public:
  // Returns the report once the group it completes is whole.
  std::optional<Report> push(const nmea::Sentence& s);

 private:
  std::map<std::string, std::vector<nmea::Sentence>> pending_;
};

inline bool is_vdm(const nmea::Sentence& s) {
  return s.type_code == "VDM" || s.type_code == "VDO";
}

}  // namespace ais
}  // namespace rtb

#endif  // RTB_AIS_HPP_
