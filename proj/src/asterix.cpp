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

#include "rtb/asterix.hpp"

#include <cmath>
#include <limits>

#include "rtb/geodesy.hpp"

namespace rtb {
namespace asterix {
namespace {

constexpr std::uint8_t kFx = 0x01;
constexpr std::size_t kMaxRecord = 0xFFFF;

struct Writer {
  std::vector<std::uint8_t> out;
  void u8(std::uint32_t v) { out.push_back(static_cast<std::uint8_t>(v)); }
  void u16(std::uint32_t v) { u8(v >> 8); u8(v); }
  void u24(std::uint32_t v) { u8(v >> 16); u8(v >> 8); u8(v); }
  void u32(std::uint32_t v) { u16(v >> 16); u16(v); }
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> b) : b_(b) {}
  std::uint32_t u8() { need(1); return b_[pos_++]; }
  std::uint32_t u16() { auto h = u8(); return (h << 8) | u8(); }
  std::uint32_t u24() { auto h = u16(); return (h << 8) | u8(); }
  std::uint32_t u32() { auto h = u16(); return (h << 16) | u16(); }
  std::span<const std::uint8_t> take(std::size_t n) {
    need(n);
    auto s = b_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t remaining() const { return b_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (b_.size() - pos_ < n) throw CodecError(ErrorCode::kTruncated, "record truncated");
  }
  std::span<const std::uint8_t> b_;
  std::size_t pos_ = 0;
};

std::uint32_t azimuth_raw(double az) {
  return static_cast<std::uint32_t>(std::llround(az / kAzimuthLsb)) & 0xFFFF;
}

std::uint32_t time_raw(double tod) {
  auto raw = std::llround(tod / kTimeLsb) % kTimeOfDayModulus;
  if (raw < 0) raw += kTimeOfDayModulus;
  return static_cast<std::uint32_t>(raw);
}

void pack_cells(const VideoMessage& m, std::vector<std::uint8_t>& out,
                std::size_t octets) {
  const std::size_t base = out.size();
  out.resize(base + octets, 0);
  std::uint8_t* p = out.data() + base;
  const unsigned res = m.cell_res;
  if (res >= 8) {
    const unsigned bytes = res / 8;
    for (std::size_t i = 0; i < m.n_cells; ++i) {
      std::uint32_t v = m.cells[i];
      for (unsigned k = 0; k < bytes; ++k)
        p[i * bytes + k] = static_cast<std::uint8_t>(v >> (8 * (bytes - 1 - k)));
    }
  } else {
    const unsigned per = 8 / res;
    for (std::size_t i = 0; i < m.n_cells; ++i) {
      const unsigned shift = 8 - res * (i % per + 1);
      p[i / per] |= static_cast<std::uint8_t>(m.cells[i] << shift);
    }
  }
}

void unpack_cells(std::span<const std::uint8_t> data, std::uint8_t res,
                  std::uint32_t n, std::vector<std::uint32_t>& cells) {
  cells.resize(n);
  if (res >= 8) {
    const unsigned bytes = res / 8;
    for (std::size_t i = 0; i < n; ++i) {
      std::uint32_t v = 0;
      for (unsigned k = 0; k < bytes; ++k) v = (v << 8) | data[i * bytes + k];
      cells[i] = v;
    }
  } else {
    const unsigned per = 8 / res;
    const unsigned mask = (1u << res) - 1;
    for (std::size_t i = 0; i < n; ++i) {
      const unsigned shift = 8 - res * (i % per + 1);
      cells[i] = (data[i / per] >> shift) & mask;
    }
  }
}

}  // namespace

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kWrongCategory: return "wrong category";
    case ErrorCode::kTruncated: return "truncated record";
    case ErrorCode::kUnknownResolution: return "unknown resolution code";
    case ErrorCode::kLengthMismatch: return "length mismatch";
    case ErrorCode::kUnsupportedMessageType: return "unsupported message type";
    case ErrorCode::kMalformed: return "malformed record";
    case ErrorCode::kEmptyVideo: return "empty video block";
    case ErrorCode::kCellOutOfRange: return "cell value out of range";
    case ErrorCode::kTooManyCells: return "too many cells";
    case ErrorCode::kInvalidField: return "invalid field";
    case ErrorCode::kIndexOutOfRange: return "index out of range";
  }
  return "unknown";
}

BlockChoice choose_block(std::size_t octets) {
  BlockChoice best;
  std::size_t best_pad = std::numeric_limits<std::size_t>::max();
  for (auto c : {BlockClass::kLow, BlockClass::kMedium, BlockClass::kHigh}) {
    const std::size_t size = block_size(c);
    const std::size_t rep = (octets + size - 1) / size;
    if (rep == 0 || rep > 255) continue;
    const std::size_t pad = rep * size - octets;
    if (pad <= best_pad) {
      best = {c, rep};
      best_pad = pad;
    }
  }
  if (best.repetitions == 0)
    throw CodecError(ErrorCode::kTooManyCells, "video data exceeds the largest block");
  return best;
}

std::uint8_t resolution_code(std::uint8_t bits) {
  switch (bits) {
    case 1: return 1;
    case 2: return 2;
    case 4: return 3;
    case 8: return 4;
    case 16: return 5;
    case 32: return 6;
    default: return 0;
  }
}

std::uint8_t resolution_bits(std::uint8_t code) {
  return code >= 1 && code <= 6 ? static_cast<std::uint8_t>(1u << (code - 1)) : 0;
}

double quantize_azimuth(double az) { return azimuth_raw(az) * kAzimuthLsb; }
double quantize_time_of_day(double tod) { return time_raw(tod) * kTimeLsb; }
double quantize_cell_dur(double s) {
  return fits_femto(s) ? seconds_from_femto(femtoseconds(s))
                       : seconds_from_nano(static_cast<std::uint64_t>(std::llround(s * 1e9)));
}

void validate(const VideoMessage& m) {
  if (resolution_code(m.cell_res) == 0)
    throw CodecError(ErrorCode::kUnknownResolution, "cell_res not in {1,2,4,8,16,32}");
  if (m.n_cells == 0) throw CodecError(ErrorCode::kEmptyVideo, "n_cells is zero");
  if (m.n_cells > kMaxCells)
    throw CodecError(ErrorCode::kTooManyCells, "n_cells exceeds 24 bits");
  if (m.cells.size() != m.n_cells)
    throw CodecError(ErrorCode::kInvalidField, "cells length differs from n_cells");
  const std::uint32_t top = max_strength(m.cell_res);
  for (auto v : m.cells)
    if (v > top) throw CodecError(ErrorCode::kCellOutOfRange, "cell value >= 2^cell_res");
  if (!(m.cell_dur > 0.0) || m.cell_dur * 1e9 >= 4294967295.5)
    throw CodecError(ErrorCode::kInvalidField, "cell_dur out of range");
  if (femtoseconds(m.cell_dur) == 0)
    throw CodecError(ErrorCode::kInvalidField, "cell_dur below 1 fs");
  if (!(m.start_az >= 0.0 && m.start_az < 360.0 && m.end_az >= 0.0 && m.end_az < 360.0))
    throw CodecError(ErrorCode::kInvalidField, "azimuth out of [0,360)");
  if (m.message_id >= kMessageIdModulus)
    throw CodecError(ErrorCode::kInvalidField, "message_id exceeds 24 bits");
  if (!(m.time_of_day >= 0.0 && m.time_of_day < 86400.0))
    throw CodecError(ErrorCode::kInvalidField, "time_of_day out of range");
}

std::vector<std::uint8_t> encode(const VideoMessage& m) {
  validate(m);
  const std::size_t octets = (static_cast<std::size_t>(m.n_cells) * m.cell_res + 7) / 8;
  if (octets > 0xFFFF)
    throw CodecError(ErrorCode::kTooManyCells, "video octets exceed 16-bit count");
  const BlockChoice block = choose_block(octets);

  Writer w;
  w.out.reserve(32 + block.repetitions * block_size(block.block_class));
  w.u8(kCategory);
  w.u16(0);  // patched below
  // FRN 1,2,3, 5 or 6, 7 + FX ; FRN 8, one of 9/10/11, 12
  const bool femto = fits_femto(m.cell_dur);
  w.u8(0x80 | 0x40 | 0x20 | (femto ? 0x04 : 0x08) | 0x02 | kFx);
  const std::uint8_t block_bit = block.block_class == BlockClass::kLow      ? 0x40
                                 : block.block_class == BlockClass::kMedium ? 0x20
                                                                            : 0x10;
  w.u8(0x80 | block_bit | 0x08);
  w.u8(m.sac);
  w.u8(m.sic);
  w.u8(kVideoMessage);
  w.u24(m.message_id);
  w.u16(azimuth_raw(m.start_az));
  w.u16(azimuth_raw(m.end_az));
  w.u32(m.center_bias);
  w.u32(static_cast<std::uint32_t>(femto ? femtoseconds(m.cell_dur)
                                         : static_cast<std::uint64_t>(std::llround(m.cell_dur * 1e9))));
  w.u8(0);
  w.u8(resolution_code(m.cell_res));
  w.u16(static_cast<std::uint32_t>(octets));
  w.u24(m.n_cells);
  w.u8(static_cast<std::uint32_t>(block.repetitions));
  const std::size_t before = w.out.size();
  pack_cells(m, w.out, octets);
  w.out.resize(before + block.repetitions * block_size(block.block_class), 0);
  w.u24(time_raw(m.time_of_day));

  if (w.out.size() > kMaxRecord)
    throw CodecError(ErrorCode::kTooManyCells, "record exceeds 65535 bytes");
  w.out[1] = static_cast<std::uint8_t>(w.out.size() >> 8);
  w.out[2] = static_cast<std::uint8_t>(w.out.size());
  return std::move(w.out);
}

VideoMessage decode(std::span<const std::uint8_t> bytes) {
  if (bytes.empty()) throw CodecError(ErrorCode::kTruncated, "empty record");
  if (bytes[0] != kCategory) throw CodecError(ErrorCode::kWrongCategory, "category is not 240");
  if (bytes.size() < 3) throw CodecError(ErrorCode::kTruncated, "record shorter than header");
  const std::size_t len = (static_cast<std::size_t>(bytes[1]) << 8) | bytes[2];
  if (len < 3) throw CodecError(ErrorCode::kLengthMismatch, "length field below header size");
  if (len > bytes.size()) throw CodecError(ErrorCode::kTruncated, "record shorter than length field");
  if (len < bytes.size()) throw CodecError(ErrorCode::kLengthMismatch, "trailing bytes after record");

  Reader r(bytes.subspan(3, len - 3));
  bool present[15] = {};
  int frn = 1;
  for (;;) {
    const std::uint32_t b = r.u8();
    for (int bit = 7; bit >= 1; --bit, ++frn)
      if (frn < 15 && (b >> bit) & 1) present[frn] = true;
    if (!(b & kFx)) break;
    if (frn > 14) throw CodecError(ErrorCode::kMalformed, "FSPEC too long");
  }
  for (int f : {1, 2, 3, 7, 8, 12})
    if (!present[f]) throw CodecError(ErrorCode::kMalformed, "mandatory video item missing");
  if (present[5] == present[6])
    throw CodecError(ErrorCode::kMalformed, "need exactly one video header item");
  if (present[4] || present[13] || present[14])
    throw CodecError(ErrorCode::kMalformed, "unsupported item present");
  const int blocks = present[9] + present[10] + present[11];
  if (blocks != 1) throw CodecError(ErrorCode::kMalformed, "need exactly one video block item");

  VideoMessage m;
  m.sac = static_cast<std::uint8_t>(r.u8());
  m.sic = static_cast<std::uint8_t>(r.u8());
  if (r.u8() != kVideoMessage)
    throw CodecError(ErrorCode::kUnsupportedMessageType, "only video messages are supported");
  m.message_id = r.u24();
  m.start_az = r.u16() * kAzimuthLsb;
  m.end_az = r.u16() * kAzimuthLsb;
  m.center_bias = r.u32();
  const std::uint32_t dur = r.u32();
  if (dur == 0) throw CodecError(ErrorCode::kMalformed, "zero cell duration");
  m.cell_dur = present[6] ? seconds_from_femto(dur) : seconds_from_nano(dur);
  r.u8();  // spare / compression flags
  const auto code = static_cast<std::uint8_t>(r.u8());
  m.cell_res = resolution_bits(code);
  if (m.cell_res == 0) throw CodecError(ErrorCode::kUnknownResolution, "unknown resolution code");
  const std::uint32_t nb_vb = r.u16();
  m.n_cells = r.u24();
  if (m.n_cells == 0) throw CodecError(ErrorCode::kEmptyVideo, "n_cells is zero");
  const BlockClass cls = present[9]    ? BlockClass::kLow
                         : present[10] ? BlockClass::kMedium
                                       : BlockClass::kHigh;
  const std::size_t rep = r.u8();
  auto data = r.take(rep * block_size(cls));
  const std::size_t octets = (static_cast<std::size_t>(m.n_cells) * m.cell_res + 7) / 8;
  if (nb_vb != octets || octets > data.size())
    throw CodecError(ErrorCode::kMalformed, "video counters inconsistent with block");
  unpack_cells(data, m.cell_res, m.n_cells, m.cells);
  m.time_of_day = r.u24() * kTimeLsb;
  if (m.time_of_day >= 86400.0) throw CodecError(ErrorCode::kMalformed, "time of day past midnight");
  if (r.remaining() != 0) throw CodecError(ErrorCode::kLengthMismatch, "unparsed bytes in record");
  return m;
}

}  // namespace asterix

RangeInterval cell_range(const VideoMessage& msg, std::size_t i) {
  if (i >= msg.n_cells) throw asterix::CodecError(asterix::ErrorCode::kIndexOutOfRange, "cell index out of range");
  const double len = cell_length(msg.cell_dur);
  const double b = msg.center_bias;
  return {len * (static_cast<double>(i) + b), len * (static_cast<double>(i) + 1.0 + b)};
}

double azimuth_span(double start_az, double end_az) {
  const double s = c360(end_az - start_az);
  return s == 0.0 ? 360.0 : s;
}

}  // namespace rtb
