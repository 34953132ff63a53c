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

#include "rtb/geodesy.hpp"

#include <cmath>

namespace rtb {
namespace geo {

Inverse inverse(GeoPosition a, GeoPosition b) {
  constexpr double f = kFlattening;
  constexpr double A = kSemiMajor;
  constexpr double B = kSemiMinor;

  const double L = deg2rad(b.lon - a.lon);
  const double U1 = std::atan((1.0 - f) * std::tan(deg2rad(a.lat)));
  const double U2 = std::atan((1.0 - f) * std::tan(deg2rad(b.lat)));
  const double sinU1 = std::sin(U1), cosU1 = std::cos(U1);
  const double sinU2 = std::sin(U2), cosU2 = std::cos(U2);

  double lambda = L;
  double sin_sigma = 0, cos_sigma = 0, sigma = 0, cos2_alpha = 0,
         cos_2sm = 0, sin_lambda = 0, cos_lambda = 0;
  bool converged = false;
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    sin_lambda = std::sin(lambda);
    cos_lambda = std::cos(lambda);
    const double t1 = cosU2 * sin_lambda;
    const double t2 = cosU1 * sinU2 - sinU1 * cosU2 * cos_lambda;
    sin_sigma = std::sqrt(t1 * t1 + t2 * t2);
    if (sin_sigma == 0.0) return Inverse{};  // coincident points
    cos_sigma = sinU1 * sinU2 + cosU1 * cosU2 * cos_lambda;
    sigma = std::atan2(sin_sigma, cos_sigma);
    const double sin_alpha = cosU1 * cosU2 * sin_lambda / sin_sigma;
    cos2_alpha = 1.0 - sin_alpha * sin_alpha;
    cos_2sm = cos2_alpha != 0.0 ? cos_sigma - 2.0 * sinU1 * sinU2 / cos2_alpha
                                : 0.0;
    const double C = f / 16.0 * cos2_alpha * (4.0 + f * (4.0 - 3.0 * cos2_alpha));
    const double prev = lambda;
    lambda = L + (1.0 - C) * f * sin_alpha *
                     (sigma + C * sin_sigma *
                                  (cos_2sm + C * cos_sigma *
                                                 (-1.0 + 2.0 * cos_2sm * cos_2sm)));
    if (std::fabs(lambda - prev) < kTolerance) {
      converged = true;
      break;
    }
  }
  if (!converged) throw GeodesyError("vincenty inverse did not converge");

  const double u2 = cos2_alpha * (A * A - B * B) / (B * B);
  const double Ak = 1.0 + u2 / 16384.0 *
                              (4096.0 + u2 * (-768.0 + u2 * (320.0 - 175.0 * u2)));
  const double Bk = u2 / 1024.0 * (256.0 + u2 * (-128.0 + u2 * (74.0 - 47.0 * u2)));
  const double dsigma =
      Bk * sin_sigma *
      (cos_2sm + Bk / 4.0 *
                     (cos_sigma * (-1.0 + 2.0 * cos_2sm * cos_2sm) -
                      Bk / 6.0 * cos_2sm * (-3.0 + 4.0 * sin_sigma * sin_sigma) *
                          (-3.0 + 4.0 * cos_2sm * cos_2sm)));

  Inverse out;
  out.distance = B * Ak * (sigma - dsigma);
  out.azimuth = c360(rad2deg(std::atan2(
      cosU2 * sin_lambda, cosU1 * sinU2 - sinU1 * cosU2 * cos_lambda)));
  out.final_azimuth = c360(rad2deg(std::atan2(
      cosU1 * sin_lambda, -sinU1 * cosU2 + cosU1 * sinU2 * cos_lambda)));
  return out;
}

Direct direct_full(GeoPosition p, double azimuth, double distance) {
  constexpr double f = kFlattening;
  constexpr double A = kSemiMajor;
  constexpr double B = kSemiMinor;

  if (distance == 0.0) return Direct{p, c360(azimuth)};

  const double alpha1 = deg2rad(azimuth);
  const double sin_a1 = std::sin(alpha1), cos_a1 = std::cos(alpha1);
  const double tanU1 = (1.0 - f) * std::tan(deg2rad(p.lat));
  const double cosU1 = 1.0 / std::sqrt(1.0 + tanU1 * tanU1);
  const double sinU1 = tanU1 * cosU1;
  const double sigma1 = std::atan2(tanU1, cos_a1);
  const double sin_alpha = cosU1 * sin_a1;
  const double cos2_alpha = 1.0 - sin_alpha * sin_alpha;
  const double u2 = cos2_alpha * (A * A - B * B) / (B * B);
  const double Ak = 1.0 + u2 / 16384.0 *
                              (4096.0 + u2 * (-768.0 + u2 * (320.0 - 175.0 * u2)));
  const double Bk = u2 / 1024.0 * (256.0 + u2 * (-128.0 + u2 * (74.0 - 47.0 * u2)));

  double sigma = distance / (B * Ak);
  double sin_sigma = 0, cos_sigma = 0, cos_2sm = 0;
  bool converged = false;
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    cos_2sm = std::cos(2.0 * sigma1 + sigma);
    sin_sigma = std::sin(sigma);
    cos_sigma = std::cos(sigma);
    const double dsigma =
        Bk * sin_sigma *
        (cos_2sm + Bk / 4.0 *
                       (cos_sigma * (-1.0 + 2.0 * cos_2sm * cos_2sm) -
                        Bk / 6.0 * cos_2sm * (-3.0 + 4.0 * sin_sigma * sin_sigma) *
                            (-3.0 + 4.0 * cos_2sm * cos_2sm)));
    const double prev = sigma;
    sigma = distance / (B * Ak) + dsigma;
    if (std::fabs(sigma - prev) < kTolerance) {
      converged = true;
      break;
    }
  }
  if (!converged) throw GeodesyError("vincenty direct did not converge");
  cos_2sm = std::cos(2.0 * sigma1 + sigma);
  sin_sigma = std::sin(sigma);
  cos_sigma = std::cos(sigma);

  const double tmp = sinU1 * sin_sigma - cosU1 * cos_sigma * cos_a1;
  const double lat2 = std::atan2(sinU1 * cos_sigma + cosU1 * sin_sigma * cos_a1,
                                 (1.0 - f) * std::sqrt(sin_alpha * sin_alpha + tmp * tmp));
  const double lambda = std::atan2(sin_sigma * sin_a1,
                                   cosU1 * cos_sigma - sinU1 * sin_sigma * cos_a1);
  const double C = f / 16.0 * cos2_alpha * (4.0 + f * (4.0 - 3.0 * cos2_alpha));
  const double L = lambda - (1.0 - C) * f * sin_alpha *
                                (sigma + C * sin_sigma *
                                             (cos_2sm + C * cos_sigma *
                                                            (-1.0 + 2.0 * cos_2sm * cos_2sm)));
  Direct out;
  out.position.lat = rad2deg(lat2);
  out.position.lon = normalize_lon(p.lon + rad2deg(L));
  out.final_azimuth = c360(rad2deg(std::atan2(sin_alpha, -tmp)));
  return out;
}

}  // namespace geo

double c360(double x) {
  double r = std::fmod(x, 360.0);
  if (r < 0.0) r += 360.0;
  if (r >= 360.0) r -= 360.0;  // -tiny + 360 rounds up to 360
  return r;
}

double angle_diff(double a, double b) {
  double d = c360(a - b);
  return d > 180.0 ? d - 360.0 : d;
}

double normalize_lon(double lon) {
  double r = std::fmod(lon + 180.0, 360.0);
  if (r < 0.0) r += 360.0;
  if (r >= 360.0) r -= 360.0;
  return r - 180.0;
}

GeoPosition polar_to_geo(GeoPosition origin, double heading, double range,
                         double bearing) {
  return geo::direct(origin, c360(heading + bearing), range);
}

Polar geo_to_polar(GeoPosition origin, double heading, GeoPosition p) {
  auto inv = geo::inverse(origin, p);
  return {inv.distance, relative_bearing(heading, inv.azimuth)};
}

EastNorth offset(GeoPosition origin, GeoPosition p) {
  auto inv = geo::inverse(origin, p);
  const double az = deg2rad(inv.azimuth);
  return {inv.distance * std::sin(az), inv.distance * std::cos(az)};
}

}  // namespace rtb
