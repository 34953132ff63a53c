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


#include "rtb/attack_engine.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "rtb/echo.hpp"

namespace rtb {

const char* to_string(AttackKind k) {
  switch (k) {
    case AttackKind::kNone: return "none";
    case AttackKind::kDos: return "dos";
    case AttackKind::kGhost: return "ghost";
    case AttackKind::kHijack: return "hijack";
  }
  return "?";
}

AttackKind attack_kind_from(const std::string& s) {
  if (s == "none" || s == "clean") return AttackKind::kNone;
  if (s == "dos") return AttackKind::kDos;
  if (s == "ghost") return AttackKind::kGhost;
  if (s == "hijack") return AttackKind::kHijack;
  throw std::invalid_argument("unknown attack: " + s);
}

const char* to_string(AttackPhase p) {
  switch (p) {
    case AttackPhase::kIdle: return "idle";
    case AttackPhase::kProbing: return "probing";
    case AttackPhase::kActive: return "active";
    case AttackPhase::kAborted: return "aborted";
  }
  return "?";
}

namespace {

std::uint64_t fnv1a(const std::vector<std::uint8_t>& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= 1099511628211ull;
  }
  return h;
}

double wall_now() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

GeoPosition ttm_position(const GeoPosition& own, const nmea::TrackedTargetMessage& t) {
  return polar_to_geo(own, 0.0, t.distance * kMetersPerNm, t.bearing);
}

}  // namespace

AttackEngine::AttackEngine(AttackConfig config, Bus& bus, int publisher_tag)
    : config_(std::move(config)), bus_(bus), tag_(publisher_tag) {}

void AttackEngine::on_datagram(const Datagram& d) {
  const std::uint64_t h = fnv1a(d.payload);
  if (auto it = sent_.find(h); it != sent_.end()) {
    sent_.erase(it);
    return;
  }
  if (d.topic == Topic::kNmea) on_nmea(d);
  else on_asterix(d);
}

KinematicState AttackEngine::own_at(Micros t) const {
  return advance(db_.own, to_seconds(t - own_fix_));
}

void AttackEngine::on_nmea(const Datagram& d) {
  if (nmea_source_.empty()) nmea_source_ = d.source;
  nmea::Sentence s;
  try {
    s = nmea::parse(std::string(d.payload.begin(), d.payload.end()));
  } catch (const std::exception&) {
    return;
  }
  if (s.type_code == "TTM" && target_track_) {
    try {
      const auto t = nmea::parse_ttm(s);
      if (t.target_id == *target_track_) {
        target_last_ttm_ = d.time;
        if (phase_ == AttackPhase::kProbing && t.status == nmea::TargetStatus::kLost) {
          db_.delete_capability = attack::Capability::kGranted;
        }
      }
    } catch (const std::exception&) {
    }
  }
  attack::state_awareness(db_, s, d.time);
  if (s.type_code == "GGA" || s.type_code == "GLL") own_fix_ = d.time;
  if (d.time < config_.arm_at) return;
  maybe_trigger(d.time);
  advance_ghost(d.time);
  emit_ais(d.time);
}

void AttackEngine::maybe_trigger(Micros now) {
  if (phase_ != AttackPhase::kIdle) return;
  switch (config_.kind) {
    case AttackKind::kNone:
      return;
    case AttackKind::kDos:
      phase_ = AttackPhase::kActive;
      stats_.triggered_at = stats_.active_at = now;
      return;
    case AttackKind::kGhost:
      if (!attack::trigger_ghost(db_, now)) return;
      stats_.triggered_at = stats_.active_at = now;
      phase_ = AttackPhase::kActive;
      start_ghost_run(attack::ghost_trajectory(), own_at(now).position, db_.own.heading, now);
      return;
    case AttackKind::kHijack: {
      const auto mmsi = attack::trigger_overtake(db_, now);
      if (!mmsi) return;
      // The probe needs an ARPA track on the target to watch.
      const GeoPosition tp = attack::contact_at(db_.contacts.at(*mmsi), now).position;
      double best = 500.0;
      std::optional<int> id;
      for (const auto& [tid, t] : db_.arpa_targets) {
        if (t.status != nmea::TargetStatus::kTracked) continue;
        const double dist = geo::inverse(ttm_position(db_.own.position, t), tp).distance;
        if (dist < best) {
          best = dist;
          id = tid;
        }
      }
      if (!id) return;
      stats_.triggered_at = now;
      stats_.target_mmsi = *mmsi;
      target_track_ = id;
      target_last_ttm_ = now;
      probe_started_ = now;
      if (db_.delete_capability == attack::Capability::kGranted) {
        phase_ = AttackPhase::kActive;
        stats_.active_at = now;
        start_ghost_run(attack::hijack_trajectory(), tp, db_.own.heading, now);
      } else {
        phase_ = AttackPhase::kProbing;
      }
      return;
    }
  }
}

void AttackEngine::start_ghost_run(const attack::Trajectory& t, GeoPosition origin,
                                   double heading, Micros now) {
  trajectory_ = t;
  trajectory_.initialize(origin, heading);
  ghost_ = attack::start_ghost(trajectory_, config_.omega, config_.accel, config_.dt);
  ghost_time_ = now;
  next_ais_ = now;
  ghost_track_.push_back(
      {now, ghost_->x, ghost_->cog, ghost_->sog, ghost_->course_cmd, ghost_->speed_cmd});
}

void AttackEngine::advance_ghost(Micros now) {
  if (!ghost_) return;
  const Micros step = to_micros(config_.dt);
  while (ghost_time_ + step <= now) {
    attack::steer(*ghost_, trajectory_);
    attack::ghost_step(*ghost_);
    ghost_time_ += step;
    attack::steer(*ghost_, trajectory_);
    ghost_track_.push_back({ghost_time_, ghost_->x, ghost_->cog, ghost_->sog,
                            ghost_->course_cmd, ghost_->speed_cmd});
  }
}

std::optional<GhostSample> AttackEngine::ghost_at(Micros t) const {
  if (!ghost_) return std::nullopt;
  GhostSample s{t, ghost_->x, ghost_->cog, ghost_->sog, ghost_->course_cmd, ghost_->speed_cmd};
  const double dt = to_seconds(t - ghost_time_);
  if (dt != 0.0 && ghost_->sog > 0.0)
    s.position = dt > 0 ? geo::direct(ghost_->x, ghost_->cog, ghost_->sog * kMpsPerKnot * dt)
                        : geo::direct(ghost_->x, c360(ghost_->cog + 180.0),
                                      -ghost_->sog * kMpsPerKnot * dt);
  return s;
}

void AttackEngine::emit_ais(Micros now) {
  if (!ghost_ || phase_ != AttackPhase::kActive) return;
  const bool hijack = config_.kind == AttackKind::kHijack;
  const double period = hijack ? config_.hijack_ais_period : config_.ghost_ais_period;
  while (next_ais_ <= now) {
    const auto g = ghost_at(next_ais_);
    std::optional<ais::StaticData> dims;
    std::uint32_t mmsi = config_.ghost_mmsi;
    if (hijack) {
      mmsi = stats_.target_mmsi.value_or(config_.ghost_mmsi);
      if (ais_count_ % 6 == 0) {
        auto it = db_.contacts.find(mmsi);
        if (it != db_.contacts.end() && it->second.dims) dims = it->second.dims;
      }
    } else if (ais_count_ % 6 == 0) {
      ais::StaticData sd;
      sd.name = "GHOST";
      sd.callsign = "GH0ST";
      sd.bow = static_cast<int>(config_.ghost_length * 0.6);
      sd.stern = static_cast<int>(config_.ghost_length) - sd.bow;
      sd.port = static_cast<int>(config_.ghost_width / 2);
      sd.starboard = static_cast<int>(config_.ghost_width) - sd.port;
      dims = sd;
    }
    const double started = wall_now();
    for (const nmea::Sentence& s : attack::ais_creator(mmsi, g->position, g->cog, g->sog,
                                                       next_ais_, dims)) {
      const std::string line = nmea::to_wire(s);
      inject(Topic::kNmea, std::vector<std::uint8_t>(line.begin(), line.end()),
             nmea_source_, now, started);
      ++stats_.nmea_sentences;
    }
    ++ais_count_;
    next_ais_ += to_micros(period);
  }
}

std::optional<AnnulusSector> AttackEngine::target_sector(Micros now) const {
  if (!stats_.target_mmsi) return std::nullopt;
  auto it = db_.contacts.find(*stats_.target_mmsi);
  if (it == db_.contacts.end()) return std::nullopt;
  const KinematicState t = attack::contact_at(it->second, now);
  const Polar p = geo_to_polar(own_at(now).position, db_.own.heading, t.position);
  double w = config_.ghost_width, h = config_.ghost_length;
  if (it->second.dims) {
    w = it->second.dims->width();
    h = it->second.dims->length();
  }
  return attack::find(p.range, p.bearing, w, h, config_.sm_pct);
}

void AttackEngine::on_asterix(const Datagram& d) {
  if (d.time < config_.arm_at || config_.kind == AttackKind::kNone) return;
  const double started = wall_now();
  VideoMessage msg;
  try {
    msg = asterix::decode(d.payload);
  } catch (const asterix::CodecError&) {
    return;
  }
  const Micros now = d.time;
  if (config_.kind == AttackKind::kDos) {
    if (phase_ != AttackPhase::kActive) maybe_trigger(now);
    if (auto out = attack::dos(msg, dos_counter_, config_.k)) inject_video(*out, d, started);
    return;
  }

  advance_ghost(now);
  const double ghost_r = 0.5 * std::hypot(config_.ghost_width, config_.ghost_length);

  if (config_.kind == AttackKind::kGhost) {
    if (phase_ != AttackPhase::kActive || !ghost_) return;
    const auto g = ghost_at(now);
    // Own position moves between fixes; dead-reckon it to the packet time.
    const Polar p = geo_to_polar(own_at(now).position, db_.own.heading, g->position);
    VideoMessage out = msg;
    if (paint_weighted(out, Footprint{p.range, p.bearing, ghost_r}, config_.bin_width) > 0)
      inject_video(out, d, started);
    return;
  }

  // Hijack.
  if (phase_ == AttackPhase::kProbing) {
    const Micros window =
        to_micros(config_.rotation_period * (config_.probe_revolutions + 1) + 1.0);
    if (db_.delete_capability == attack::Capability::kGranted) {
      phase_ = AttackPhase::kActive;
      stats_.active_at = now;
      const auto it = db_.contacts.find(*stats_.target_mmsi);
      start_ghost_run(attack::hijack_trajectory(), attack::contact_at(it->second, now).position,
                      db_.own.heading, now);
    } else if (now - probe_started_ > window) {
      // Track kept reporting: the display sums instead of replacing.
      db_.delete_capability = attack::Capability::kDenied;
      phase_ = AttackPhase::kAborted;
      return;
    } else {
      if (const auto sector = target_sector(now))
        if (auto out = attack::delete_sector(msg, *sector)) inject_video(*out, d, started);
      return;
    }
  }
  if (phase_ != AttackPhase::kActive) return;

  VideoMessage out = msg;
  bool touched = false;
  if (const auto sector = target_sector(now)) {
    if (auto del = attack::delete_sector(msg, *sector)) {
      out = std::move(*del);
      touched = true;
    }
  }
  if (!touched) {
    out.center_bias += 1;
    out.cells.erase(out.cells.begin());
    out.n_cells -= 1;
  }
  const auto g = ghost_at(now);
  const Polar p = geo_to_polar(own_at(now).position, db_.own.heading, g->position);
  if (paint_weighted(out, Footprint{p.range, p.bearing, ghost_r}, config_.bin_width) > 0)
    touched = true;
  if (touched) inject_video(out, d, started);
}

void AttackEngine::inject_video(const VideoMessage& m, const Datagram& trigger,
                                double started_wall) {
  std::vector<std::uint8_t> bytes = asterix::encode(m);
  stats_.asterix_bytes += bytes.size();
  ++stats_.asterix_packets;
  inject(Topic::kAsterix, std::move(bytes), trigger.source, trigger.time, started_wall);
}

void AttackEngine::inject(Topic topic, std::vector<std::uint8_t> payload,
                          const std::string& source, Micros time, double started_wall) {
  Datagram d;
  d.topic = topic;
  d.payload = std::move(payload);
  d.source = source;  // spoofed
  d.time = time;
  d.publisher = tag_;
  sent_.emplace(fnv1a(d.payload), 1);
  bus_.publish(d);
  const double latency = wall_now() - started_wall;
  stats_.latencies.push_back(latency);
  if (latency > config_.epsilon_budget) ++stats_.over_budget;
}

}  // namespace rtb
