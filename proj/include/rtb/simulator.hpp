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


#ifndef RTB_SIMULATOR_HPP_
#define RTB_SIMULATOR_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "rtb/ais.hpp"
#include "rtb/asterix.hpp"
#include "rtb/nmea.hpp"
#include "rtb/sector.hpp"

namespace rtb {

struct ShipSpec {
  std::string name;
  std::uint32_t mmsi = 0;
  KinematicState state;
  int bow = 60;  // meters from the reference point
  int stern = 40;
  int port = 8;
  int starboard = 8;
  std::vector<GeoPosition> waypoints;

  double length() const { return bow + stern; }
  double width() const { return port + starboard; }
  // Radius of the circle around the bounding box.
  double radius() const;
  ais::StaticData static_data() const;
};

struct AntennaSpec {
  double rotation_period = 2.5;     // seconds per revolution
  double bearing_resolution = 1.0;  // degrees
  double range_resolution = 10.85;  // meters
  double range_scale_nm = 12.0;
  std::uint8_t sac = 25;
  std::uint8_t sic = 10;
  std::uint8_t cell_res = 8;
  std::string source = "10.0.0.10:4000";

  int n_bins() const;
  double cell_dur() const;  // quantized to the wire
  std::uint32_t n_cells() const;
  Micros period_us() const { return to_micros(rotation_period); }
};

struct EmissionRates {
  double nav_hz = 1.0;      // GGA, THS, VHW
  double ais_period = 2.0;  // seconds
  int static_every = 6;     // static report every N position reports
};

enum class ScenarioKind { kClean, kDos, kGhost, kHijack };

const char* to_string(ScenarioKind k);
ScenarioKind scenario_kind_from(const std::string& s);

struct Scenario {
  std::uint64_t seed = 1;
  ScenarioKind kind = ScenarioKind::kClean;
  double duration = 60.0;  // seconds after warmup
  double warmup = 90.0;    // seconds of clean traffic before any attack
  double start_tod = 43200.0;
  ShipSpec victim;
  std::vector<ShipSpec> ships;
  AntennaSpec antenna;
  EmissionRates rates;
  // Index into ships of the slow vessel placed ahead for an overtaking
  // situation, or -1.
  int overtaken = -1;

  Micros start() const { return to_micros(start_tod); }
  Micros attack_start() const { return start() + to_micros(warmup); }
  Micros end() const { return start() + to_micros(warmup + duration); }
};

// Randomized scenario following the published experimental setup.
Scenario randomize(ScenarioKind kind, std::uint64_t seed);

struct TimedSentence {
  Micros time = 0;
  nmea::Sentence sentence;
};

class World {
 public:
  explicit World(Scenario scenario);

  const Scenario& scenario() const { return scenario_; }
  Micros now() const { return now_; }
  const ShipSpec& victim() const { return victim_; }
  const std::vector<ShipSpec>& ships() const { return ships_; }

  void step(double dt);
  void step_to(Micros t);

  // Timing of the m-th radar message since the start.
  Micros message_time(long long m) const;
  long long next_message() const { return next_message_; }

  // The m-th message painted from the current world state.
  VideoMessage radar_message(long long m) const;

  // Steps to the next message time and returns that message.
  VideoMessage next_radar_message();

  // One full revolution starting at the next message.
  std::vector<VideoMessage> sweep();

  // Sentences due at or before now, in time order.
  std::vector<TimedSentence> emit_sensors();

 private:
  void follow_waypoints(ShipSpec& s, std::size_t& k);

  Scenario scenario_;
  ShipSpec victim_;
  std::vector<ShipSpec> ships_;
  std::vector<std::size_t> waypoint_;
  Micros now_;
  long long next_message_ = 0;
  double cell_dur_;
  std::uint32_t n_cells_;
  int n_bins_;
  Micros next_nav_;
  std::vector<Micros> next_ais_;
  std::vector<long long> ais_count_;
  int vdm_sequence_ = 0;
};

}  // namespace rtb

#endif  // RTB_SIMULATOR_HPP_
