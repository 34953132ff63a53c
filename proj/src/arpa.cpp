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

#include "rtb/arpa.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <tuple>

namespace rtb {

CpaResult cpa_tcpa(double rx, double ry, double vx, double vy) {
  const double v2 = vx * vx + vy * vy;
  if (std::sqrt(v2) < 1e-6) return {std::hypot(rx, ry), std::numeric_limits<double>::infinity()};
  const double t = -(rx * vx + ry * vy) / v2;
  return {std::hypot(rx + vx * t, ry + vy * t), t};
}

CpaResult cpa_tcpa(const KinematicState& own, const KinematicState& target) {
  const auto inv = geo::inverse(own.position, target.position);
  const double az = deg2rad(inv.azimuth);
  const double rx = inv.distance * std::sin(az), ry = inv.distance * std::cos(az);
  // the target's north is rotated by meridian convergence in own's frame
  const double gamma = inv.distance > 0 ? angle_diff(inv.final_azimuth, inv.azimuth) : 0.0;
  const double vo = own.sog * kMpsPerKnot, vt = target.sog * kMpsPerKnot;
  const double co = deg2rad(own.cog), ct = deg2rad(target.cog - gamma);
  return cpa_tcpa(rx, ry, vt * std::sin(ct) - vo * std::sin(co),
                  vt * std::cos(ct) - vo * std::cos(co));
}

const char* to_string(TrackStatus s) {
  switch (s) {
    case TrackStatus::kAcquiring: return "acquiring";
    case TrackStatus::kTracked: return "tracked";
    case TrackStatus::kDangerous: return "dangerous";
    case TrackStatus::kLost: return "lost";
  }
  return "unknown";
}

int TrackStatusMachine::hits_in_window() const { return std::popcount(history_); }

TrackStatus TrackStatusMachine::update(bool hit) {
  history_ = ((history_ << 1) | (hit ? 1u : 0u)) & ((1u << window_) - 1u);
  misses_ = hit ? 0 : misses_ + 1;
  if (status_ == TrackStatus::kAcquiring && hits_in_window() >= acquire_hits_) {
    status_ = TrackStatus::kTracked;
  } else if (status_ == TrackStatus::kTracked && misses_ >= lost_misses_) {
    status_ = TrackStatus::kLost;
  }
  return status_;
}

ArpaTracker::ArpaTracker(ArpaConfig config) : config_(std::move(config)) {}

std::vector<Plot> ArpaTracker::extract(const PpiImage& img) {
  const std::size_t nb = img.n_bins();
  const std::size_t nc = config_.n_cells;
  const double len = config_.range_resolution;
  const double res = img.config().bearing_resolution;
  grid_.assign(nb * nc, 0);
  visited_.assign(nb * nc, 0);
  bin_time_.assign(nb, 0);

  for (std::size_t i = 0; i < nb; ++i) {
    const PpiBin& b = img.bin(i);
    bin_time_[i] = b.last_update;
    if (!b.valid) continue;
    std::uint8_t* row = grid_.data() + i * nc;
    const double top = max_strength(b.cell_res);
    const bool same = b.geometry.center_bias == 0 &&
                      std::fabs(b.geometry.cell_length() - len) < 1e-3;
    if (same) {
      const std::size_t n = std::min<std::size_t>(nc, b.cells.size());
      if (b.cell_res == 8) {
        for (std::size_t j = 0; j < n; ++j) row[j] = static_cast<std::uint8_t>(b.cells[j]);
      } else {
        for (std::size_t j = 0; j < n; ++j)
          row[j] = static_cast<std::uint8_t>(std::lround(255.0 * b.cells[j] / top));
      }
    } else {
      for (std::size_t j = 0; j < nc; ++j)
        row[j] = static_cast<std::uint8_t>(
            std::lround(255.0 * img.intensity_at(i, (static_cast<double>(j) + 0.5) * len)));
    }
  }

  const auto seed = static_cast<std::uint8_t>(std::ceil(255.0 * config_.threshold));
  std::vector<Plot> plots;
  std::vector<std::pair<long long, long long>> stack;
  for (std::size_t i = 0; i < nb; ++i) {
    for (std::size_t j = 0; j < nc; ++j) {
      const std::size_t idx = i * nc + j;
      if (grid_[idx] < seed || visited_[idx]) continue;
      double sw = 0, su = 0, sj = 0, st = 0;
      long long umin = 0, umax = 0, jmin = j, jmax = j;
      std::size_t count = 0;
      const Micros t0 = bin_time_[i];
      visited_[idx] = 1;
      stack.assign(1, {0, static_cast<long long>(j)});
      while (!stack.empty()) {
        auto [u, c] = stack.back();
        stack.pop_back();
        const std::size_t bi = static_cast<std::size_t>(((static_cast<long long>(i) + u) %
                                                         static_cast<long long>(nb) + nb) % nb);
        const double w = grid_[bi * nc + c];
        sw += w;
        su += w * u;
        sj += w * c;
        st += w * static_cast<double>(bin_time_[bi] - t0);
        umin = std::min(umin, u);
        umax = std::max(umax, u);
        jmin = std::min(jmin, c);
        jmax = std::max(jmax, c);
        ++count;
        for (int du = -1; du <= 1; ++du) {
          for (int dc = -1; dc <= 1; ++dc) {
            const long long nu = u + du, ncell = c + dc;
            if (ncell < 0 || ncell >= static_cast<long long>(nc)) continue;
            const std::size_t nbi = static_cast<std::size_t>(
                ((static_cast<long long>(i) + nu) % static_cast<long long>(nb) + nb) % nb);
            const std::size_t nidx = nbi * nc + ncell;
            if (visited_[nidx] || grid_[nidx] == 0) continue;
            visited_[nidx] = 1;
            stack.push_back({nu, ncell});
          }
        }
      }
      Plot p;
      p.range = (sj / sw + 0.5) * len;
      p.bearing = c360((static_cast<double>(i) + su / sw + 0.5) * res);
      p.time = t0 + static_cast<Micros>(std::llround(st / sw));
      p.radial_extent = static_cast<double>(jmax - jmin + 1) * len;
      p.cross_extent = deg2rad(static_cast<double>(umax - umin + 1) * res) * p.range;
      p.cells = count;
      plots.push_back(p);
    }
  }
  return plots;
}

KinematicState ArpaTracker::own_at(const KinematicState& own, Micros now, Micros t) const {
  return advance(own, to_seconds(t - now));
}

GeoPosition ArpaTracker::predict(const ArpaTrack& t, Micros when) const {
  if (!t.has_velocity) return t.position;
  const double dt = to_seconds(when - t.time);
  const double speed = std::hypot(t.vel_east, t.vel_north);
  if (speed == 0.0 || dt == 0.0) return t.position;
  const double az = rad2deg(std::atan2(t.vel_east, t.vel_north));
  return dt > 0 ? geo::direct(t.position, c360(az), speed * dt)
                : geo::direct(t.position, c360(az + 180.0), -speed * dt);
}

void ArpaTracker::update_cpa(ArpaTrack& t, const KinematicState& own, Micros now) const {
  const EastNorth r = offset(own.position, predict(t, now));
  const double vo = own.sog * kMpsPerKnot;
  const double co = deg2rad(own.cog);
  const CpaResult c = cpa_tcpa(r.east, r.north, t.vel_east - vo * std::sin(co),
                               t.vel_north - vo * std::cos(co));
  t.dcpa = c.dcpa / kMetersPerNm;
  t.tcpa = c.tcpa / 60.0;
}

nmea::TrackedTargetMessage ArpaTracker::ttm(const ArpaTrack& t, const KinematicState& own,
                                            Micros now) const {
  const auto inv = geo::inverse(own.position, predict(t, now));
  nmea::TrackedTargetMessage m;
  m.target_id = t.id;
  m.distance = inv.distance / kMetersPerNm;
  m.bearing = inv.azimuth;
  m.speed = t.sog;
  m.course = t.cog;
  m.dcpa = t.dcpa;
  m.tcpa = t.tcpa;
  m.status = t.status == TrackStatus::kLost ? nmea::TargetStatus::kLost
                                            : nmea::TargetStatus::kTracked;
  m.utc = std::fmod(to_seconds(now), 86400.0);
  return m;
}

std::vector<nmea::TrackedTargetMessage> ArpaTracker::scan(const PpiImage& img,
                                                          const KinematicState& own,
                                                          Micros now) {
  struct Measurement {
    Plot plot;
    GeoPosition z;
  };
  std::vector<Measurement> meas;
  for (const Plot& p : extract(img)) {
    if (p.radial_extent > config_.max_extent || p.cross_extent > config_.max_extent) continue;
    const KinematicState o = own_at(own, now, p.time);
    meas.push_back({p, geo::direct(o.position, c360(o.heading + p.bearing), p.range)});
  }

  // Greedy nearest-neighbour association inside the gate.
  std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
  for (std::size_t ti = 0; ti < tracks_.size(); ++ti) {
    for (std::size_t mi = 0; mi < meas.size(); ++mi) {
      const double d = geo::inverse(predict(tracks_[ti], meas[mi].plot.time), meas[mi].z).distance;
      if (d < config_.gate) pairs.emplace_back(d, ti, mi);
    }
  }
  std::sort(pairs.begin(), pairs.end());
  std::vector<int> track_meas(tracks_.size(), -1);
  std::vector<bool> used(meas.size(), false);
  for (auto& [d, ti, mi] : pairs) {
    if (track_meas[ti] >= 0 || used[mi]) continue;
    track_meas[ti] = static_cast<int>(mi);
    used[mi] = true;
  }

  for (std::size_t ti = 0; ti < tracks_.size(); ++ti) {
    ArpaTrack& t = tracks_[ti];
    const bool hit = track_meas[ti] >= 0;
    if (hit) {
      const Measurement& m = meas[track_meas[ti]];
      const double dt = to_seconds(m.plot.time - t.time);
      if (dt > 0) {
        if (!t.has_velocity) {
          const EastNorth d = offset(t.position, m.z);
          t.vel_east = d.east / dt;
          t.vel_north = d.north / dt;
          t.has_velocity = true;
          t.position = m.z;
        } else {
          const GeoPosition pred = predict(t, m.plot.time);
          const auto inv = geo::inverse(pred, m.z);
          const double az = deg2rad(inv.azimuth);
          t.position = geo::direct(pred, inv.azimuth, config_.alpha * inv.distance);
          t.vel_east += config_.beta / dt * inv.distance * std::sin(az);
          t.vel_north += config_.beta / dt * inv.distance * std::cos(az);
        }
        t.time = m.plot.time;
        t.cog = c360(rad2deg(std::atan2(t.vel_east, t.vel_north)));
        t.sog = std::hypot(t.vel_east, t.vel_north) / kMpsPerKnot;
      }
      ++t.hits;
    }
    t.machine.update(hit);
  }

  for (std::size_t mi = 0; mi < meas.size(); ++mi) {
    if (used[mi]) continue;
    const Plot& p = meas[mi].plot;
    const bool in_zone = std::any_of(
        config_.acquisition_zones.begin(), config_.acquisition_zones.end(),
        [&](const AnnulusSector& z) { return z.contains(p.range, p.bearing); });
    if (!in_zone) continue;
    ArpaTrack t;
    t.id = next_id_++;
    t.machine = TrackStatusMachine(config_.acquire_hits, config_.window, config_.lost_misses);
    t.machine.update(true);
    t.position = meas[mi].z;
    t.time = p.time;
    t.hits = 1;
    tracks_.push_back(t);
  }

  std::vector<nmea::TrackedTargetMessage> out;
  std::vector<ArpaTrack> kept;
  kept.reserve(tracks_.size());
  for (ArpaTrack& t : tracks_) {
    if (t.machine.stale()) continue;
    const TrackStatus s = t.machine.status();
    if (s == TrackStatus::kAcquiring) {
      t.status = s;
      kept.push_back(t);
      continue;
    }
    update_cpa(t, own, now);
    if (s == TrackStatus::kLost) {
      t.status = TrackStatus::kLost;
      out.push_back(ttm(t, own, now));
      continue;
    }
    const bool danger = t.dcpa <= config_.cpa_limit && t.tcpa >= 0.0 &&
                        t.tcpa <= config_.tcpa_limit;
    t.status = danger ? TrackStatus::kDangerous : TrackStatus::kTracked;
    out.push_back(ttm(t, own, now));
    kept.push_back(t);
  }
  tracks_ = std::move(kept);
  return out;
}

}  // namespace rtb
