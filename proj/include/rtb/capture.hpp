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


#ifndef RTB_CAPTURE_HPP_
#define RTB_CAPTURE_HPP_

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "rtb/transport.hpp"

namespace rtb {

// File layout: "RHCAP001", then records of
//   u64 time_us | u8 topic | u32 length | payload
// all big-endian.
inline constexpr char kCaptureMagic[] = "RHCAP001";

struct CaptureRecord {
  Micros time = 0;
  Topic topic = Topic::kAsterix;
  std::vector<std::uint8_t> payload;

  bool operator==(const CaptureRecord&) const = default;
};

class CaptureWriter {
 public:
  explicit CaptureWriter(const std::string& path);
  void write(const CaptureRecord& r);
  void write(const Datagram& d) { write(CaptureRecord{d.time, d.topic, d.payload}); }
  void flush();

 private:
  std::ofstream out_;
};

class CaptureReader {
 public:
  explicit CaptureReader(const std::string& path);
  // nullopt at a clean end of file; throws on a torn record.
  std::optional<CaptureRecord> next();

 private:
  std::ifstream in_;
};

std::vector<CaptureRecord> read_capture(const std::string& path);

}  // namespace rtb

#endif  // RTB_CAPTURE_HPP_
