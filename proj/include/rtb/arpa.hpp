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

#ifndef RTB_ARPA_HPP_
#define RTB_ARPA_HPP_

#include <cstdint>
#include <limits>
#include <vector>

#include "rtb/nmea.hpp"
#include "rtb/ppi.hpp"
#include "rtb/sector.hpp"

namespace rtb {

struct CpaResult {
  double dcpa = 0.0;  // meters
  double tcpa = 0.0;  // seconds; +inf when there is no relative motion
};

// Flat relative-motion solution in the local tangent plane of `own`.
CpaResult cpa_tcpa(const KinematicState& own, const KinematicState& target);

// Same, from relative position (m) and relative velocity (m/s).
CpaResult cpa_tcpa(double rx, double ry, double vx, double vy);

enum class TrackStatus { kAcquiring, kTracked, kDangerous, kLost };

const char* to_string(TrackStatus s);

// Hit/miss bookkeeping: acquiring -> tracked once the trailing window holds
// `acquire_hits` hits; tracked -> lost after `lost_misses` consecutive misses.
class TrackStatusMachine {
 public:
  TrackStatusMachine(int acquire_hits = 5, int window = 10, int lost_misses = 9)
      : acquire_hits_(acquire_hits), window_(window), lost_misses_(lost_misses) {}

  TrackStatus update(bool hit);
  TrackStatus status() const { return status_; }
  std::uint32_t history() const { return history_; }
  int consecutive_misses() const { return misses_; }
  int hits_in_window() const;
  // An acquiring candidate that keeps missing is dropped silently.
  bool stale() const { return status_ == TrackStatus::kAcquiring && misses_ >= lost_misses_; }

 private:
  int acquire_hits_;
  int window_;
  int lost_misses_;
  std::uint32_t history_ = 0;  // bit 0 = latest scan
  int misses_ = 0;
  TrackStatus status_ = TrackStatus::kAcquiring;
};

struct ArpaConfig {
  double cpa_limit = 2.0;    // nautical miles
  double tcpa_limit = 15.0;  // minutes
  std::vector<AnnulusSector> acquisition_zones{AnnulusSector{0.0, 360.0, 0.2 * kMetersPerNm,
                                                             11.5 * kMetersPerNm}};
  double gate = 500.0;  // meters
  double alpha = 0.5;
  double beta = 0.3;
  double threshold = 0.5;  // fraction of full strength
  double range_resolution = 10.85;
  std::size_t n_cells = 2048;
  double max_extent = 1000.0;  // larger clusters are not point targets
  int acquire_hits = 5;
  int window = 10;
  int lost_misses = 9;
};

struct ArpaTrack {
  int id = 0;
  TrackStatusMachine machine;
  TrackStatus status = TrackStatus::kAcquiring;
  GeoPosition position;
  Micros time = 0;  // of the position estimate
  double vel_east = 0.0;
  double vel_north = 0.0;
  bool has_velocity = false;
  double cog = 0.0;
  double sog = 0.0;   // knots
  double dcpa = 0.0;  // nautical miles
  double tcpa = std::numeric_limits<double>::infinity();  // minutes
  int hits = 0;
};

// A strength-weighted echo cluster in antenna-relative polar terms.
struct Plot {
  double range = 0.0;
  double bearing = 0.0;
  Micros time = 0;
  double radial_extent = 0.0;
  double cross_extent = 0.0;
  std::size_t cells = 0;
};

class ArpaTracker {
 public:
  explicit ArpaTracker(ArpaConfig config = {});

  const ArpaConfig& config() const { return config_; }
  const std::vector<ArpaTrack>& tracks() const { return tracks_; }

  // Clusters of the displayed image.
  std::vector<Plot> extract(const PpiImage& img);

  // One call per revolution. `own` is the state at `now`.
  std::vector<nmea::TrackedTargetMessage> scan(const PpiImage& img, const KinematicState& own,
                                               Micros now);

 private:
  KinematicState own_at(const KinematicState& own, Micros now, Micros t) const;
  GeoPosition predict(const ArpaTrack& t, Micros when) const;
  void update_cpa(ArpaTrack& t, const KinematicState& own, Micros now) const;
  nmea::TrackedTargetMessage ttm(const ArpaTrack& t, const KinematicState& own, Micros now) const;

  ArpaConfig config_;
  std::vector<ArpaTrack> tracks_;
  int next_id_ = 1;
  std::vector<std::uint8_t> grid_;
  std::vector<Micros> bin_time_;
  std::vector<std::uint8_t> visited_;
};

}  // namespace rtb

#endif  // RTB_ARPA_HPP_
