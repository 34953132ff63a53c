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

#ifndef RTB_SECTOR_HPP_
#define RTB_SECTOR_HPP_

#include <limits>

#include "rtb/geodesy.hpp"

namespace rtb {

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

// Polar region around own ship. The angular interval runs clockwise from
// a_min to a_max and may wrap through north; a_min == 0, a_max == 360
// denotes the full circle.
struct AnnulusSector {
  double a_min = 0.0;
  double a_max = 360.0;
  double d_min = 0.0;
  double d_max = kUnbounded;

  bool operator==(const AnnulusSector&) const = default;

  bool full_circle() const { return a_max - a_min >= 360.0; }

  // Clockwise angular width in degrees.
  double width() const { return full_circle() ? 360.0 : c360(a_max - a_min); }

  bool contains_angle(double az) const {
    if (full_circle()) return true;
    return c360(az - a_min) <= width();
  }

  bool contains(double range, double az) const {
    return range >= d_min && range <= d_max && contains_angle(az);
  }

  // True when [start, start+span] overlaps the angular interval.
  bool overlaps_angles(double start, double span) const {
    if (full_circle() || span >= 360.0) return true;
    return c360(start - a_min) <= width() || c360(a_min - start) <= span;
  }

  // True when [start, start+span] lies inside the angular interval.
  bool covers_angles(double start, double span) const {
    if (full_circle()) return true;
    return span <= width() && c360(start - a_min) + span <= width();
  }

  bool overlaps_range(double lo, double hi) const { return hi >= d_min && lo <= d_max; }
  bool covers_range(double lo, double hi) const { return lo >= d_min && hi <= d_max; }
};

struct KinematicState {
  GeoPosition position;
  double cog = 0.0;      // degrees
  double sog = 0.0;      // knots
  double heading = 0.0;  // degrees
};

// Dead reckoning along the current course.
inline KinematicState advance(const KinematicState& s, double dt) {
  KinematicState out = s;
  if (s.sog != 0.0 && dt != 0.0) {
    const double d = s.sog * kMpsPerKnot * dt;
    out.position = d > 0 ? geo::direct(s.position, s.cog, d)
                         : geo::direct(s.position, c360(s.cog + 180.0), -d);
  }
  return out;
}

using Micros = long long;  // simulation time, microseconds since midnight

inline constexpr Micros kMicrosPerSecond = 1000000;
inline double to_seconds(Micros t) { return static_cast<double>(t) * 1e-6; }
inline Micros to_micros(double s) {
  return static_cast<Micros>(s * 1e6 + (s >= 0 ? 0.5 : -0.5));
}

}  // namespace rtb

#endif  // RTB_SECTOR_HPP_
