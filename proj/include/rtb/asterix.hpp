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

#ifndef RTB_ASTERIX_HPP_
#define RTB_ASTERIX_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rtb {

inline constexpr double kSpeedOfLight = 299792458.0;

// One CAT-240 video message. Azimuths are antenna-relative degrees.
struct VideoMessage {
  std::uint8_t sac = 0;
  std::uint8_t sic = 0;
  std::uint32_t message_id = 0;  // 24 bits on the wire
  double time_of_day = 0.0;      // seconds since midnight
  double start_az = 0.0;
  double end_az = 0.0;
  std::uint32_t center_bias = 0;
  double cell_dur = 0.0;  // seconds
  std::uint8_t cell_res = 8;
  std::uint32_t n_cells = 0;
  std::vector<std::uint32_t> cells;

  bool operator==(const VideoMessage&) const = default;
};

struct AntennaId {
  std::uint8_t sac = 0;
  std::uint8_t sic = 0;
  std::string source_address;  // "host:port", empty matches any

  bool operator==(const AntennaId&) const = default;
};

namespace asterix {

inline constexpr std::uint8_t kCategory = 240;
inline constexpr std::uint8_t kVideoMessage = 0x02;
inline constexpr double kAzimuthLsb = 360.0 / 65536.0;
inline constexpr double kTimeLsb = 1.0 / 128.0;
inline constexpr std::uint32_t kMaxCells = (1u << 24) - 1;
inline constexpr std::uint32_t kMessageIdModulus = 1u << 24;
inline constexpr std::uint32_t kTimeOfDayModulus = 86400u * 128u;

enum class ErrorCode {
  kWrongCategory,
  kTruncated,
  kUnknownResolution,
  kLengthMismatch,
  kUnsupportedMessageType,
  kMalformed,
  kEmptyVideo,
  kCellOutOfRange,
  kTooManyCells,
  kInvalidField,
  kIndexOutOfRange,
};

const char* to_string(ErrorCode code);

class CodecError : public std::runtime_error {
 public:
  CodecError(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

enum class BlockClass : std::uint8_t { kLow = 0, kMedium = 1, kHigh = 2 };

inline constexpr std::size_t block_size(BlockClass c) {
  return c == BlockClass::kLow ? 4 : c == BlockClass::kMedium ? 64 : 256;
}

struct BlockChoice {
  BlockClass block_class = BlockClass::kLow;
  std::size_t repetitions = 0;
};

// Least padding wins; ties go to the larger block (fewer repetitions).
BlockChoice choose_block(std::size_t valid_octets);

std::uint8_t resolution_code(std::uint8_t bits);  // 0 when not representable
std::uint8_t resolution_bits(std::uint8_t code);  // 0 when unknown

inline std::uint64_t femtoseconds(double seconds) {
  return static_cast<std::uint64_t>(seconds * 1e15 + 0.5);
}
inline double seconds_from_femto(std::uint64_t fs) { return static_cast<double>(fs) * 1e-15; }
inline double seconds_from_nano(std::uint64_t ns) { return static_cast<double>(ns) * 1e-9; }

// Cells shorter than 2^32 fs travel in the femtosecond video header; longer
// ones fall back to the nanosecond header.
inline bool fits_femto(double seconds) { return femtoseconds(seconds) <= 0xFFFFFFFFull; }

// Round-trip through the wire quantization.
double quantize_azimuth(double az);
double quantize_time_of_day(double tod);
double quantize_cell_dur(double seconds);

// Throws CodecError when `msg` breaks the type invariants.
void validate(const VideoMessage& msg);

std::vector<std::uint8_t> encode(const VideoMessage& msg);
VideoMessage decode(std::span<const std::uint8_t> bytes);

}  // namespace asterix

struct RangeInterval {
  double rho_min = 0.0;
  double rho_max = 0.0;
};

inline double cell_length(double cell_dur) { return cell_dur * kSpeedOfLight / 2.0; }

RangeInterval cell_range(const VideoMessage& msg, std::size_t i);

// c360(end - start), with a zero difference meaning a full turn.
double azimuth_span(double start_az, double end_az);
inline double azimuth_span(const VideoMessage& m) {
  return azimuth_span(m.start_az, m.end_az);
}

inline std::uint32_t max_strength(std::uint8_t cell_res) {
  return cell_res >= 32 ? 0xFFFFFFFFu : (1u << cell_res) - 1u;
}

}  // namespace rtb

#endif  // RTB_ASTERIX_HPP_
