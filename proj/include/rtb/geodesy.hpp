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

#ifndef RTB_GEODESY_HPP_
#define RTB_GEODESY_HPP_

#include <stdexcept>

namespace rtb {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kMetersPerNm = 1852.0;
inline constexpr double kMpsPerKnot = 1852.0 / 3600.0;

inline constexpr double deg2rad(double d) { return d * kPi / 180.0; }
inline constexpr double rad2deg(double r) { return r * 180.0 / kPi; }

struct GeoPosition {
  double lat = 0.0;
  double lon = 0.0;
};

class GeodesyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace geo {

// WGS-84.
inline constexpr double kSemiMajor = 6378137.0;
inline constexpr double kFlattening = 1.0 / 298.257223563;
inline constexpr double kSemiMinor = kSemiMajor * (1.0 - kFlattening);

inline constexpr double kTolerance = 1e-12;
inline constexpr int kMaxIterations = 200;

struct Inverse {
  double distance = 0.0;       // meters
  double azimuth = 0.0;        // initial, degrees [0,360)
  double final_azimuth = 0.0;  // at b, degrees [0,360)
};

struct Direct {
  GeoPosition position;
  double final_azimuth = 0.0;
};

// Throws GeodesyError when the iteration does not converge (near-antipodal).
Inverse inverse(GeoPosition a, GeoPosition b);
Direct direct_full(GeoPosition p, double azimuth, double distance);

inline GeoPosition direct(GeoPosition p, double azimuth, double distance) {
  return direct_full(p, azimuth, distance).position;
}

}  // namespace geo

// Degrees into [0,360).
double c360(double x);

// Signed smallest difference a - b in (-180,180].
double angle_diff(double a, double b);

// Longitude into [-180,180).
double normalize_lon(double lon);

inline double relative_bearing(double heading, double absolute_azimuth) {
  return c360(absolute_azimuth - heading);
}

// Position of a point at `range` meters and `bearing` degrees relative to
// `heading` as seen from `origin`.
GeoPosition polar_to_geo(GeoPosition origin, double heading, double range,
                         double bearing);

struct Polar {
  double range = 0.0;    // meters
  double bearing = 0.0;  // degrees relative to heading
};

Polar geo_to_polar(GeoPosition origin, double heading, GeoPosition p);

// East/north offset of `p` from `origin` in meters, via the inverse problem.
struct EastNorth {
  double east = 0.0;
  double north = 0.0;
};

EastNorth offset(GeoPosition origin, GeoPosition p);

}  // namespace rtb

#endif  // RTB_GEODESY_HPP_
