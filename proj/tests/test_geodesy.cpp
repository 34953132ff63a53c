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


#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "rtb/geodesy.hpp"
#include "rtb/sector.hpp"

namespace rtb {
namespace {

// Meridian arc from the equator, by Simpson integration of the meridional
// radius of curvature. Independent of the Vincenty code.
double meridian_arc(double lat_deg) {
  const double a = geo::kSemiMajor, f = geo::kFlattening;
  const double e2 = f * (2 - f);
  const int n = 20000;
  const double h = deg2rad(lat_deg) / n;
  auto m = [&](double phi) {
    const double s = std::sin(phi);
    return a * (1 - e2) / std::pow(1 - e2 * s * s, 1.5);
  };
  double sum = m(0) + m(deg2rad(lat_deg));
  for (int i = 1; i < n; ++i) sum += (i % 2 ? 4 : 2) * m(i * h);
  return sum * h / 3;
}

TEST(Geodesy, EquatorDegreeOfLongitude) {
  const auto inv = geo::inverse({0, 0}, {0, 1});
  EXPECT_NEAR(inv.distance, geo::kSemiMajor * kPi / 180.0, 1e-6);
  EXPECT_NEAR(inv.azimuth, 90.0, 1e-9);
}

TEST(Geodesy, MeridianMatchesIntegratedArc) {
  for (double lat : {10.0, 44.0, 60.0}) {
    const auto inv = geo::inverse({0, 7}, {lat, 7});
    EXPECT_NEAR(inv.distance, meridian_arc(lat), 1e-3) << lat;
  }
}

TEST(Geodesy, DirectNorthAlongMeridian) {
  const double d = 10 * kMetersPerNm;
  const GeoPosition p = geo::direct({44.0, 8.0}, 0.0, d);
  EXPECT_NEAR(p.lon, 8.0, 1e-12);
  EXPECT_NEAR(meridian_arc(p.lat) - meridian_arc(44.0), d, 1e-3);
}

TEST(Geodesy, DirectInverseRoundTrip) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lat(-70, 70), lon(-179, 179), az(0, 360),
      dist(1, 200000);
  for (int i = 0; i < 2000; ++i) {
    const GeoPosition a{lat(rng), lon(rng)};
    const double az0 = az(rng), d0 = dist(rng);
    const GeoPosition b = geo::direct(a, az0, d0);
    const auto inv = geo::inverse(a, b);
    ASSERT_NEAR(inv.distance, d0, 1e-4);
    ASSERT_NEAR(angle_diff(inv.azimuth, az0), 0.0, 1e-6);
  }
}

TEST(Geodesy, PolarRoundTrip) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> h(0, 360), b(0, 360), r(10, 22000);
  const GeoPosition o{44.2, 8.7};
  for (int i = 0; i < 1000; ++i) {
    const double heading = h(rng), bearing = b(rng), range = r(rng);
    const Polar p = geo_to_polar(o, heading, polar_to_geo(o, heading, range, bearing));
    ASSERT_NEAR(p.range, range, 1e-4);
    ASSERT_NEAR(angle_diff(p.bearing, bearing), 0.0, 1e-6);
  }
}

TEST(Geodesy, AngleHelpers) {
  EXPECT_DOUBLE_EQ(c360(-10), 350);
  EXPECT_DOUBLE_EQ(c360(720), 0);
  EXPECT_DOUBLE_EQ(angle_diff(10, 350), 20);
  EXPECT_DOUBLE_EQ(angle_diff(350, 10), -20);
  EXPECT_DOUBLE_EQ(relative_bearing(90, 45), 315);
}

TEST(Sector, WrapAroundContainment) {
  const AnnulusSector s{350, 10, 100, 200};
  EXPECT_TRUE(s.contains(150, 355));
  EXPECT_TRUE(s.contains(150, 5));
  EXPECT_FALSE(s.contains(150, 20));
  EXPECT_FALSE(s.contains(250, 0));
  EXPECT_TRUE(s.covers_angles(355, 5));
  EXPECT_FALSE(s.covers_angles(5, 10));
  EXPECT_TRUE(s.overlaps_angles(5, 10));
  EXPECT_TRUE(s.overlaps_angles(345, 6));
  EXPECT_FALSE(s.overlaps_angles(20, 1));
}

TEST(Sector, AdvanceMovesAlongCourse) {
  KinematicState s{{44, 8}, 0, 10, 0};
  const KinematicState t = advance(s, 3600);
  EXPECT_NEAR(geo::inverse(s.position, t.position).distance / (10 * kMetersPerNm), 1.0, 1e-3);
  s.sog = 0;
  EXPECT_DOUBLE_EQ(advance(s, 100).position.lat, 44);
}

}  // namespace
}  // namespace rtb
