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


#ifndef RTB_ATTACK_ENGINE_HPP_
#define RTB_ATTACK_ENGINE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "rtb/attack.hpp"
#include "rtb/simulator.hpp"
#include "rtb/transport.hpp"

namespace rtb {

enum class AttackKind { kNone, kDos, kGhost, kHijack };

const char* to_string(AttackKind k);
AttackKind attack_kind_from(const std::string& s);

struct AttackConfig {
  AttackKind kind = AttackKind::kNone;
  Micros arm_at = 0;  // nothing happens before this time
  int k = 10;
  double omega = 3.0;  // deg/s
  double accel = 0.1;  // kn/s
  double dt = 1.0;     // controller step, seconds
  double sm_pct = 0.5;
  double epsilon_budget = 0.050;  // seconds
  double ghost_ais_period = 2.0;
  double hijack_ais_period = 1.5;
  std::uint32_t ghost_mmsi = 247999999;
  double ghost_width = 30.0;
  double ghost_length = 120.0;
  double bin_width = 1.0;       // degrees, for echo painting
  int probe_revolutions = 9;
  double rotation_period = 2.5;  // as inferred from traffic
};

enum class AttackPhase { kIdle, kProbing, kActive, kAborted };

const char* to_string(AttackPhase p);

struct GhostSample {
  Micros time = 0;
  GeoPosition position;
  double cog = 0.0;
  double sog = 0.0;
  double course_cmd = 0.0;
  double speed_cmd = 0.0;
};

struct AttackStats {
  std::uint64_t asterix_packets = 0;
  std::uint64_t asterix_bytes = 0;
  std::uint64_t nmea_sentences = 0;
  std::vector<double> latencies;  // seconds, wall clock
  std::uint64_t over_budget = 0;
  std::optional<Micros> triggered_at;
  std::optional<Micros> active_at;
  std::optional<std::uint32_t> target_mmsi;
};

class AttackEngine {
 public:
  AttackEngine(AttackConfig config, Bus& bus, int publisher_tag);

  // Every datagram observed on the shared medium, own injections included.
  void on_datagram(const Datagram& d);

  const AttackConfig& config() const { return config_; }
  const attack::ShipStateDb& db() const { return db_; }
  AttackPhase phase() const { return phase_; }
  const AttackStats& stats() const { return stats_; }
  const std::vector<GhostSample>& ghost_track() const { return ghost_track_; }
  bool ghost_running() const { return ghost_.has_value(); }
  // Ghost state extrapolated to `t`.
  std::optional<GhostSample> ghost_at(Micros t) const;

 private:
  KinematicState own_at(Micros t) const;
  void on_nmea(const Datagram& d);
  void on_asterix(const Datagram& d);
  void maybe_trigger(Micros now);
  void advance_ghost(Micros now);
  void emit_ais(Micros now);
  std::optional<AnnulusSector> target_sector(Micros now) const;
  void inject(Topic topic, std::vector<std::uint8_t> payload, const std::string& source,
              Micros time, double started_wall);
  void inject_video(const VideoMessage& m, const Datagram& trigger, double started_wall);
  void start_ghost_run(const attack::Trajectory& t, GeoPosition origin, double heading,
                       Micros now);

  AttackConfig config_;
  Bus& bus_;
  int tag_;
  attack::ShipStateDb db_;
  AttackPhase phase_ = AttackPhase::kIdle;
  AttackStats stats_;
  int dos_counter_ = 0;

  attack::Trajectory trajectory_;
  std::optional<attack::GhostController> ghost_;
  Micros ghost_time_ = 0;
  std::vector<GhostSample> ghost_track_;
  Micros next_ais_ = 0;
  long long ais_count_ = 0;

  // Hijack.
  std::optional<int> target_track_;
  Micros probe_started_ = 0;
  Micros target_last_ttm_ = 0;

  Micros own_fix_ = 0;
  std::string nmea_source_;
  std::unordered_multimap<std::uint64_t, int> sent_;  // own payload hashes
};

}  // namespace rtb

#endif  // RTB_ATTACK_ENGINE_HPP_
