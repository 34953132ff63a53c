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


#ifndef RTB_ATTACK_HPP_
#define RTB_ATTACK_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "rtb/ais.hpp"
#include "rtb/asterix.hpp"
#include "rtb/nmea.hpp"
#include "rtb/sector.hpp"

namespace rtb {
namespace attack {

// Annulus sector holding a target of size w x h at range rho and bearing
// theta (relative to heading), with a relative size margin.
AnnulusSector find(double rho, double theta, double w, double h, double sm_pct);

using AlterFn = std::function<std::optional<VideoMessage>(const VideoMessage&,
                                                          const AnnulusSector&)>;

std::optional<VideoMessage> alter(const VideoMessage& pkt, const AnnulusSector& sector,
                                  const AlterFn& f);

std::optional<VideoMessage> copy_ship(VideoMessage pkt, const AnnulusSector& sector, double o_a,
                                      double o_d);

// Zeroes the in-sector cells and shifts the block one cell out, so the
// geometry no longer matches what the display holds.
std::optional<VideoMessage> delete_sector(VideoMessage pkt, const AnnulusSector& sector);

// Whole-circle, whole-range block at full strength, once every k calls.
std::optional<VideoMessage> dos(VideoMessage pkt, int& counter, int k);

// ---- ghost kinematics ------------------------------------------------------

struct PolarPoint {
  double range = 0.0;    // meters
  double bearing = 0.0;  // degrees relative to the origin's heading
};

struct Trajectory {
  std::vector<PolarPoint> waypoints;
  std::vector<double> speeds;  // knots, one per waypoint
  GeoPosition origin;
  std::vector<GeoPosition> absolute;

  void initialize(GeoPosition o, double heading);
  bool initialized() const { return !absolute.empty(); }
};

Trajectory ghost_trajectory();
Trajectory hijack_trajectory();

struct GhostController {
  GeoPosition x;
  double cog = 0.0;
  double sog = 0.0;  // knots
  double course_cmd = 0.0;  // C(t)
  double speed_cmd = 0.0;   // S(t), knots
  double omega = 3.0;       // max turn rate, deg/s
  double accel = 0.1;       // max acceleration, kn/s
  double dt = 1.0;          // seconds
  double capture_radius = 50.0;
  std::size_t next = 1;  // waypoint being steered for
};

GhostController start_ghost(const Trajectory& t, double omega, double accel, double dt);

// One update: position first, then course and speed toward the commands.
void ghost_step(GhostController& c);

// Retargets C(t) and S(t) from the trajectory.
void steer(GhostController& c, const Trajectory& t);

// ---- state awareness -----------------------------------------------------

enum class Capability { kUnknown, kGranted, kDenied };

const char* to_string(Capability c);

struct Contact {
  KinematicState state;
  Micros last_seen = 0;
  std::optional<ais::StaticData> dims;
};

struct ShipStateDb {
  KinematicState own;
  Micros clock = 0;
  bool have_position = false;
  bool have_heading = false;
  std::map<std::uint32_t, Contact> contacts;
  std::map<int, nmea::TrackedTargetMessage> arpa_targets;
  Capability delete_capability = Capability::kUnknown;
  ais::VdmAssembler assembler;
};

void state_awareness(ShipStateDb& db, const nmea::Sentence& s, Micros now);

// Contact state dead-reckoned to `now`.
KinematicState contact_at(const Contact& c, Micros now);

bool trigger_ghost(const ShipStateDb& db, Micros now, double radius_nm = 6.0);

std::optional<std::uint32_t> trigger_overtake(const ShipStateDb& db, Micros now,
                                              double radius_nm = 6.0);

// VDM position report (and static data every few calls) for a synthetic
// vessel.
std::vector<nmea::Sentence> ais_creator(std::uint32_t mmsi, const GeoPosition& x, double cog,
                                        double sog, Micros now,
                                        const std::optional<ais::StaticData>& dims);

}  // namespace attack
}  // namespace rtb

#endif  // RTB_ATTACK_HPP_
