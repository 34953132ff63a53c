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


#include "rtb/capture.hpp"

#include <array>
#include <cstring>

namespace rtb {

CaptureWriter::CaptureWriter(const std::string& path) : out_(path, std::ios::binary) {
  if (!out_) throw TransportError("cannot open capture for writing: " + path);
  out_.write(kCaptureMagic, 8);
}

void CaptureWriter::write(const CaptureRecord& r) {
  std::array<char, 13> h{};
  const auto t = static_cast<std::uint64_t>(r.time);
  for (int i = 0; i < 8; ++i) h[i] = static_cast<char>(t >> (56 - 8 * i));
  h[8] = static_cast<char>(r.topic);
  const auto n = static_cast<std::uint32_t>(r.payload.size());
  for (int i = 0; i < 4; ++i) h[9 + i] = static_cast<char>(n >> (24 - 8 * i));
  out_.write(h.data(), h.size());
  out_.write(reinterpret_cast<const char*>(r.payload.data()),
             static_cast<std::streamsize>(r.payload.size()));
  if (!out_) throw TransportError("capture write failed");
}

void CaptureWriter::flush() { out_.flush(); }

CaptureReader::CaptureReader(const std::string& path) : in_(path, std::ios::binary) {
  if (!in_) throw TransportError("cannot open capture: " + path);
  char magic[8];
  in_.read(magic, 8);
  if (in_.gcount() != 8 || std::memcmp(magic, kCaptureMagic, 8) != 0)
    throw TransportError("not a capture file: " + path);
}

std::optional<CaptureRecord> CaptureReader::next() {
  std::array<unsigned char, 13> h{};
  in_.read(reinterpret_cast<char*>(h.data()), h.size());
  if (in_.gcount() == 0) return std::nullopt;
  if (in_.gcount() != static_cast<std::streamsize>(h.size()))
    throw TransportError("truncated capture record header");
  CaptureRecord r;
  std::uint64_t t = 0;
  for (int i = 0; i < 8; ++i) t = (t << 8) | h[i];
  r.time = static_cast<Micros>(t);
  if (h[8] > 1) throw TransportError("unknown capture topic");
  r.topic = static_cast<Topic>(h[8]);
  std::uint32_t n = 0;
  for (int i = 0; i < 4; ++i) n = (n << 8) | h[9 + i];
  r.payload.resize(n);
  in_.read(reinterpret_cast<char*>(r.payload.data()), n);
  if (in_.gcount() != static_cast<std::streamsize>(n))
    throw TransportError("truncated capture payload");
  return r;
}

std::vector<CaptureRecord> read_capture(const std::string& path) {
  CaptureReader reader(path);
  std::vector<CaptureRecord> out;
  while (auto r = reader.next()) out.push_back(std::move(*r));
  return out;
}

}  // namespace rtb
