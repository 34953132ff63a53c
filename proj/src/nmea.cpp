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

#include "rtb/nmea.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace rtb {
namespace nmea {
namespace {

constexpr char kHex[] = "0123456789ABCDEF";

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  for (;;) {
    auto next = s.find(sep, pos);
    if (next == std::string_view::npos) {
      out.push_back(s.substr(pos));
      return out;
    }
    out.push_back(s.substr(pos, next - pos));
    pos = next + 1;
  }
}

void expect(const Sentence& s, std::string_view type, std::size_t min_fields) {
  if (s.type_code != type)
    throw NmeaError(ErrorKind::kBadField, "expected " + std::string(type) + " sentence");
  if (s.fields.size() < min_fields)
    throw NmeaError(ErrorKind::kFieldCount, s.type_code + ": wrong field count");
}

void check_address(const std::string& part) {
  for (char c : part)
    if (!((c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9')))
      throw NmeaError(ErrorKind::kReservedCharacter, "address must be upper-case alphanumeric");
}

std::string format_angle(double value, int degree_digits, char* hemisphere, char pos, char neg) {
  *hemisphere = value < 0 ? neg : pos;
  const long long units = std::llround(std::fabs(value) * 600000.0);  // 1e-4 minute
  const long long deg = units / 600000;
  const long long rem = units % 600000;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%0*lld%02lld.%04lld", degree_digits, deg, rem / 10000,
                rem % 10000);
  return buf;
}

double parse_angle(std::string_view field, std::string_view hemisphere, int degree_digits,
                   char neg) {
  if (field.size() < static_cast<std::size_t>(degree_digits) + 2)
    throw NmeaError(ErrorKind::kBadField, "short coordinate field");
  const double deg = to_double(field.substr(0, degree_digits));
  const double min = to_double(field.substr(degree_digits));
  double v = deg + min / 60.0;
  if (hemisphere.size() != 1) throw NmeaError(ErrorKind::kBadField, "bad hemisphere");
  if (hemisphere[0] == neg) v = -v;
  return v;
}

}  // namespace

std::uint8_t checksum(std::string_view body) {
  std::uint8_t c = 0;
  for (char ch : body) c ^= static_cast<std::uint8_t>(ch);
  return c;
}

bool is_reserved(char c) {
  switch (c) {
    case '\r': case '\n': case '$': case '*': case ',': case '!':
    case '\\': case '^': case '~':
      return true;
    default:
      return c < 0x20 || c > 0x7E;
  }
}

Sentence make(std::string talker, std::string type_code, std::vector<std::string> fields,
              char start) {
  Sentence s{start, std::move(talker), std::move(type_code), std::move(fields), 0};
  std::string body = s.address();
  for (auto& f : s.fields) {
    body += ',';
    body += f;
  }
  s.checksum = checksum(body);
  return s;
}

Sentence parse(std::string_view line) {
  if (line.size() >= 2 && line.substr(line.size() - 2) == "\r\n") {
    line.remove_suffix(2);
  } else if (!line.empty() && line.back() == '\n') {
    line.remove_suffix(1);
  }
  if (line.empty() || (line[0] != '$' && line[0] != '!'))
    throw NmeaError(ErrorKind::kFraming, "sentence must start with '$' or '!'");
  const auto star = line.rfind('*');
  if (star == std::string_view::npos || star + 3 != line.size())
    throw NmeaError(ErrorKind::kFraming, "missing or misplaced checksum delimiter");
  const int hi = hex_value(line[star + 1]);
  const int lo = hex_value(line[star + 2]);
  if (hi < 0 || lo < 0) throw NmeaError(ErrorKind::kFraming, "checksum is not hex");
  const std::string_view body = line.substr(1, star - 1);
  for (char c : body)
    if (c != ',' && is_reserved(c))
      throw NmeaError(ErrorKind::kFraming, "reserved character in sentence body");
  const auto expected = static_cast<std::uint8_t>(hi * 16 + lo);
  if (checksum(body) != expected) throw NmeaError(ErrorKind::kChecksum, "checksum mismatch");

  auto parts = split(body, ',');
  if (parts[0].size() != 5) throw NmeaError(ErrorKind::kFraming, "address field must be 5 chars");
  Sentence s;
  s.start = line[0];
  s.talker = std::string(parts[0].substr(0, 2));
  s.type_code = std::string(parts[0].substr(2));
  s.fields.reserve(parts.size() - 1);
  for (std::size_t i = 1; i < parts.size(); ++i) s.fields.emplace_back(parts[i]);
  s.checksum = expected;
  return s;
}

std::string to_wire(const Sentence& s) { return serialize(s) + "\r\n"; }

std::string serialize(const Sentence& s) {
  if (s.start != '$' && s.start != '!')
    throw NmeaError(ErrorKind::kFraming, "start delimiter must be '$' or '!'");
  if (s.talker.size() != 2 || s.type_code.size() != 3)
    throw NmeaError(ErrorKind::kFraming, "talker is 2 chars and type 3 chars");
  check_address(s.talker);
  check_address(s.type_code);
  std::string body = s.address();
  for (const auto& f : s.fields) {
    for (char c : f)
      if (is_reserved(c))
        throw NmeaError(ErrorKind::kReservedCharacter, "reserved character in field");
    body += ',';
    body += f;
  }
  const std::uint8_t c = checksum(body);
  std::string out;
  out.reserve(body.size() + 6);
  out += s.start;
  out += body;
  out += '*';
  out += kHex[c >> 4];
  out += kHex[c & 0xF];
  return out;
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  std::string s(buf);
  if (s[0] == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

double to_double(std::string_view f) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
  if (f.empty() || ec != std::errc() || p != f.data() + f.size())
    throw NmeaError(ErrorKind::kBadField, "not a number: '" + std::string(f) + "'");
  return v;
}

int to_int(std::string_view f) {
  int v = 0;
  auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
  if (f.empty() || ec != std::errc() || p != f.data() + f.size())
    throw NmeaError(ErrorKind::kBadField, "not an integer: '" + std::string(f) + "'");
  return v;
}

std::string format_lat(double lat, char* h) { return format_angle(lat, 2, h, 'N', 'S'); }
std::string format_lon(double lon, char* h) { return format_angle(lon, 3, h, 'E', 'W'); }
double parse_lat(std::string_view f, std::string_view h) { return parse_angle(f, h, 2, 'S'); }
double parse_lon(std::string_view f, std::string_view h) { return parse_angle(f, h, 3, 'W'); }

std::string format_utc(double seconds) {
  long long cs = std::llround(seconds * 100.0) % 8640000;
  if (cs < 0) cs += 8640000;
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02lld%02lld%02lld.%02lld", cs / 360000, cs / 6000 % 60,
                cs / 100 % 60, cs % 100);
  return buf;
}

double parse_utc(std::string_view f) {
  if (f.size() < 6) throw NmeaError(ErrorKind::kBadField, "short UTC field");
  return to_int(f.substr(0, 2)) * 3600.0 + to_int(f.substr(2, 2)) * 60.0 + to_double(f.substr(4));
}

Sentence to_sentence(const Ths& v, std::string talker) {
  return make(std::move(talker), "THS", {fixed(v.heading, 1), std::string(1, v.mode)});
}

Sentence to_sentence(const Hdt& v, std::string talker) {
  return make(std::move(talker), "HDT", {fixed(v.heading, 1), "T"});
}

Sentence to_sentence(const Gga& v, std::string talker) {
  char ns, ew;
  auto lat = format_lat(v.position.lat, &ns);
  auto lon = format_lon(v.position.lon, &ew);
  char sats[8];
  std::snprintf(sats, sizeof sats, "%02d", v.satellites);
  return make(std::move(talker), "GGA",
              {format_utc(v.utc), lat, std::string(1, ns), lon, std::string(1, ew),
               std::to_string(v.quality), sats, fixed(v.hdop, 1), fixed(v.altitude, 1), "M",
               "0.0", "M", "", ""});
}

Sentence to_sentence(const Gll& v, std::string talker) {
  char ns, ew;
  auto lat = format_lat(v.position.lat, &ns);
  auto lon = format_lon(v.position.lon, &ew);
  return make(std::move(talker), "GLL",
              {lat, std::string(1, ns), lon, std::string(1, ew), format_utc(v.utc),
               std::string(1, v.status), "A"});
}

Sentence to_sentence(const Vhw& v, std::string talker) {
  return make(std::move(talker), "VHW",
              {fixed(v.heading_true, 1), "T", fixed(v.heading_magnetic, 1), "M",
               fixed(v.speed_kn, 2), "N", fixed(v.speed_kn * 1.852, 2), "K"});
}

Sentence to_sentence(const TrackedTargetMessage& v, std::string talker) {
  char id[8];
  std::snprintf(id, sizeof id, "%02d", v.target_id);
  const char status = v.status == TargetStatus::kTracked ? 'T'
                      : v.status == TargetStatus::kLost  ? 'L'
                                                         : 'Q';
  return make(std::move(talker), "TTM",
              {id, fixed(v.distance, 3), fixed(v.bearing, 1), "T", fixed(v.speed, 2),
               fixed(v.course, 1), "T", fixed(v.dcpa, 3),
               std::isfinite(v.tcpa) ? fixed(v.tcpa, 3) : std::string(), "N", v.name,
               std::string(1, status), "", format_utc(v.utc), "A"});
}

Ths parse_ths(const Sentence& s) {
  expect(s, "THS", 2);
  if (s.fields[1].size() != 1) throw NmeaError(ErrorKind::kBadField, "THS mode");
  return {to_double(s.fields[0]), s.fields[1][0]};
}

Hdt parse_hdt(const Sentence& s) {
  expect(s, "HDT", 2);
  return {to_double(s.fields[0])};
}

Gga parse_gga(const Sentence& s) {
  expect(s, "GGA", 9);
  Gga g;
  g.utc = parse_utc(s.fields[0]);
  g.position.lat = parse_lat(s.fields[1], s.fields[2]);
  g.position.lon = parse_lon(s.fields[3], s.fields[4]);
  g.quality = to_int(s.fields[5]);
  g.satellites = to_int(s.fields[6]);
  g.hdop = to_double(s.fields[7]);
  g.altitude = to_double(s.fields[8]);
  return g;
}

Gll parse_gll(const Sentence& s) {
  expect(s, "GLL", 6);
  Gll g;
  g.position.lat = parse_lat(s.fields[0], s.fields[1]);
  g.position.lon = parse_lon(s.fields[2], s.fields[3]);
  g.utc = parse_utc(s.fields[4]);
  if (s.fields[5].size() != 1) throw NmeaError(ErrorKind::kBadField, "GLL status");
  g.status = s.fields[5][0];
  return g;
}

Vhw parse_vhw(const Sentence& s) {
  expect(s, "VHW", 8);
  Vhw v;
  v.heading_true = s.fields[0].empty() ? 0.0 : to_double(s.fields[0]);
  v.heading_magnetic = s.fields[2].empty() ? 0.0 : to_double(s.fields[2]);
  v.speed_kn = to_double(s.fields[4]);
  return v;
}

TrackedTargetMessage parse_ttm(const Sentence& s) {
  expect(s, "TTM", 13);
  TrackedTargetMessage t;
  t.target_id = to_int(s.fields[0]);
  t.distance = to_double(s.fields[1]);
  t.bearing = to_double(s.fields[2]);
  t.speed = to_double(s.fields[4]);
  t.course = to_double(s.fields[5]);
  t.dcpa = to_double(s.fields[7]);
  t.tcpa = s.fields[8].empty() ? kInfiniteTcpa : to_double(s.fields[8]);
  t.name = s.fields[10];
  const std::string& st = s.fields[11];
  if (st == "T") {
    t.status = TargetStatus::kTracked;
  } else if (st == "L") {
    t.status = TargetStatus::kLost;
  } else if (st == "Q") {
    t.status = TargetStatus::kAcquiring;
  } else {
    throw NmeaError(ErrorKind::kBadField, "TTM status must be T, L or Q");
  }
  if (s.fields.size() > 13 && !s.fields[13].empty()) t.utc = parse_utc(s.fields[13]);
  return t;
}

}  // namespace nmea
}  // namespace rtb
