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

#ifndef RTB_NMEA_HPP_
#define RTB_NMEA_HPP_

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rtb/geodesy.hpp"

namespace rtb {
namespace nmea {

enum class ErrorKind {
  kChecksum,
  kFraming,
  kReservedCharacter,
  kFieldCount,
  kBadField,
  kArmoring,
  kMissingPart,
  kOutOfRange,
};

class NmeaError : public std::runtime_error {
 public:
  NmeaError(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

struct Sentence {
  char start = '$';  // '!' for encapsulated (AIS) sentences
  std::string talker;
  std::string type_code;
  std::vector<std::string> fields;
  std::uint8_t checksum = 0;

  std::string address() const { return talker + type_code; }
  bool operator==(const Sentence&) const = default;
};

std::uint8_t checksum(std::string_view body);

// Builds a sentence and fills in its checksum.
Sentence make(std::string talker, std::string type_code,
              std::vector<std::string> fields, char start = '$');

// Accepts lines with or without the trailing CR LF.
Sentence parse(std::string_view line);

// "$TTSSS,f1,...*HH\r\n"; the checksum is recomputed from the content.
std::string serialize(const Sentence& s);
// serialize() plus the CRLF terminator, as sent in a datagram
std::string to_wire(const Sentence& s);

bool is_reserved(char c);

// Field helpers.
std::string fixed(double v, int decimals);
double to_double(std::string_view field);  // throws kBadField
int to_int(std::string_view field);

// ---- typed payloads ------------------------------------------------------

struct Ths {
  double heading = 0.0;
  char mode = 'A';
};

struct Hdt {
  double heading = 0.0;
};

struct Gga {
  double utc = 0.0;  // seconds since midnight
  GeoPosition position;
  int quality = 1;
  int satellites = 8;
  double hdop = 1.0;
  double altitude = 0.0;
};

struct Gll {
  GeoPosition position;
  double utc = 0.0;
  char status = 'A';
};

struct Vhw {
  double heading_true = 0.0;
  double heading_magnetic = 0.0;
  double speed_kn = 0.0;
};

enum class TargetStatus { kAcquiring, kTracked, kLost };

inline constexpr double kInfiniteTcpa = std::numeric_limits<double>::infinity();

struct TrackedTargetMessage {
  int target_id = 0;
  double distance = 0.0;  // nautical miles
  double bearing = 0.0;   // degrees true
  double speed = 0.0;     // knots
  double course = 0.0;    // degrees true
  double dcpa = 0.0;      // nautical miles
  double tcpa = 0.0;      // minutes, may be negative or infinite
  TargetStatus status = TargetStatus::kAcquiring;
  std::string name;
  double utc = 0.0;
};

Sentence to_sentence(const Ths& v, std::string talker = "HE");
Sentence to_sentence(const Hdt& v, std::string talker = "HE");
Sentence to_sentence(const Gga& v, std::string talker = "GP");
Sentence to_sentence(const Gll& v, std::string talker = "GP");
Sentence to_sentence(const Vhw& v, std::string talker = "VW");
Sentence to_sentence(const TrackedTargetMessage& v, std::string talker = "RA");

Ths parse_ths(const Sentence& s);
Hdt parse_hdt(const Sentence& s);
Gga parse_gga(const Sentence& s);
Gll parse_gll(const Sentence& s);
Vhw parse_vhw(const Sentence& s);
TrackedTargetMessage parse_ttm(const Sentence& s);

// ddmm.mmmm / dddmm.mmmm with hemisphere letter.
std::string format_lat(double lat, char* hemisphere);
std::string format_lon(double lon, char* hemisphere);
double parse_lat(std::string_view field, std::string_view hemisphere);
double parse_lon(std::string_view field, std::string_view hemisphere);

std::string format_utc(double seconds);
double parse_utc(std::string_view field);

}  // namespace nmea
}  // namespace rtb

#endif  // RTB_NMEA_HPP_
