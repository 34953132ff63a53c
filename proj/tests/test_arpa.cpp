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

#include <bit>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>

#include "rtb/arpa.hpp"
#include "rtb/asterix.hpp"
#include "rtb/geodesy.hpp"

namespace rtb {
namespace {

TEST(TrackStatus, FiveOfTenExhaustive) {
  for (unsigned h = 0; h < 1024; ++h) {
    TrackStatusMachine m;
    for (int i = 9; i >= 0; --i) m.update((h >> i) & 1u);
    const bool tracked = std::popcount(h) >= 5;
    ASSERT_EQ(m.status(), tracked ? TrackStatus::kTracked : TrackStatus::kAcquiring) << h;
    ASSERT_EQ(m.history(), h);
  }
}

TEST(TrackStatus, NineMissesLoseTrack) {
  TrackStatusMachine m;
  for (int i = 0; i < 5; ++i) m.update(true);
  ASSERT_EQ(m.status(), TrackStatus::kTracked);
  for (int i = 0; i < 8; ++i) EXPECT_EQ(m.update(false), TrackStatus::kTracked);
  EXPECT_EQ(m.update(false), TrackStatus::kLost);
  // lost is final
  for (int i = 0; i < 10; ++i) EXPECT_EQ(m.update(true), TrackStatus::kLost);
}

TEST(TrackStatus, HitResetsMissCount) {
  TrackStatusMachine m;
  for (int i = 0; i < 5; ++i) m.update(true);
  for (int k = 0; k < 5; ++k) {
    for (int i = 0; i < 8; ++i) m.update(false);
    m.update(true);
  }
  EXPECT_EQ(m.status(), TrackStatus::kTracked);
}

TEST(TrackStatus, AcquiringCandidateGoesStale) {
  TrackStatusMachine m;
  m.update(true);
  for (int i = 0; i < 8; ++i) m.update(false);
  EXPECT_FALSE(m.stale());
  m.update(false);
  EXPECT_TRUE(m.stale());
}

// Minimum of |r + v t| by scan then ternary refinement.
std::pair<double, double> brute_min(const std::function<double(double)>& dist, double t0,
                                    double t1) {
  const int n = 4000;
  int best = 0;
  double bd = dist(t0);
  for (int i = 1; i <= n; ++i) {
    const double d = dist(t0 + (t1 - t0) * i / n);
    if (d < bd) bd = d, best = i;
  }
  double lo = t0 + (t1 - t0) * std::max(best - 1, 0) / n;
  double hi = t0 + (t1 - t0) * std::min(best + 1, n) / n;
  for (int i = 0; i < 200; ++i) {
    const double a = lo + (hi - lo) / 3, b = hi - (hi - lo) / 3;
    (dist(a) < dist(b) ? hi : lo) = (dist(a) < dist(b) ? b : a);
  }
  const double t = (lo + hi) / 2;
  return {dist(t), t};
}

TEST(Cpa, MatchesBruteForce) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> pos(-22000, 22000), vel(-15, 15);
  for (int i = 0; i < 1000; ++i) {
    const double rx = pos(rng), ry = pos(rng), vx = vel(rng), vy = vel(rng);
    const auto c = cpa_tcpa(rx, ry, vx, vy);
    // |tcpa| <= |r| / |v|
    const double h = 2 * std::hypot(rx, ry) / std::max(std::hypot(vx, vy), 1e-9);
    const auto [d, t] = brute_min(
        [&](double s) { return std::hypot(rx + vx * s, ry + vy * s); }, -h, h);
    ASSERT_NEAR(c.dcpa, d, 1e-3 * std::max(d, 1.0)) << i;
    ASSERT_NEAR(c.tcpa, t, 1e-3 * std::max(std::fabs(t), 1.0)) << i;
  }
}

TEST(Cpa, NoRelativeMotion) {
  const auto c = cpa_tcpa(300, 400, 0, 0);
  EXPECT_DOUBLE_EQ(c.dcpa, 500);
  EXPECT_TRUE(std::isinf(c.tcpa));
  EXPECT_GT(c.tcpa, 0);
}

// Ships holding a course, stepped the way the simulator moves them.
std::vector<GeoPosition> sail(KinematicState s, int seconds) {
  std::vector<GeoPosition> out{s.position};
  for (int i = 0; i < seconds; ++i) {
    s = advance(s, 1.0);
    out.push_back(s.position);
  }
  return out;
}

GeoPosition at(const std::vector<GeoPosition>& track, double t) {
  const auto i = std::min(static_cast<std::size_t>(t), track.size() - 2);
  const double f = t - static_cast<double>(i);
  return {track[i].lat + f * (track[i + 1].lat - track[i].lat),
          track[i].lon + f * (track[i + 1].lon - track[i].lon)};
}

TEST(Cpa, GeodesicEncountersMatchBruteForce) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> lat(-60, 60), lon(-170, 170), ang(0, 360),
      range(500, 22000), kn(0, 25);
  int checked = 0;
  for (int i = 0; i < 1000 && checked < 200; ++i) {
    KinematicState own{{lat(rng), lon(rng)}, ang(rng), kn(rng), 0};
    KinematicState tgt{geo::direct(own.position, ang(rng), range(rng)), ang(rng), kn(rng), 0};
    const auto c = cpa_tcpa(own, tgt);
    // future encounters inside the alarm horizon
    if (!(c.tcpa > 0 && c.tcpa < 900)) continue;
    ++checked;
    const auto a = sail(own, 1200), b = sail(tgt, 1200);
    const auto [d, t] = brute_min(
        [&](double s) { return geo::inverse(at(a, s), at(b, s)).distance; }, 0, 1199);
    // straight relative motion against rhumb lines: 0.1% of the opening range
    const double r0 = geo::inverse(own.position, tgt.position).distance;
    ASSERT_NEAR(c.dcpa, d, 1e-3 * r0) << i;
    ASSERT_NEAR(c.tcpa, t, 1e-2 * t + 2.0) << i;
  }
  EXPECT_EQ(checked, 200);
}

constexpr double kCellDur = 72383409e-15;

// An echo three cells deep, three degrees wide.
VideoMessage blob(double bearing, double range, bool present) {
  VideoMessage m;
  m.start_az = c360(bearing - 1.5);
  m.end_az = asterix::quantize_azimuth(c360(bearing + 1.5));
  m.cell_dur = asterix::quantize_cell_dur(kCellDur);
  m.cell_res = 8;
  m.n_cells = 2048;
  m.cells.assign(2048, 0);
  const auto j = static_cast<std::size_t>(range / cell_length(m.cell_dur));
  if (present)
    for (std::size_t k = j - 1; k <= j + 1; ++k) m.cells[k] = 255;
  return m;
}

constexpr Micros kScan = 2500000;

TEST(Tracker, AcquiresThenLosesStaticTarget) {
  PpiImage img;
  ArpaTracker arpa;
  const KinematicState own{{44.0, 8.0}, 0, 0, 0};
  std::vector<nmea::TrackedTargetMessage> out;
  for (int s = 1; s <= 5; ++s) {
    img.apply(blob(45, 5000, true), s * kScan);
    out = arpa.scan(img, own, s * kScan);
    if (s < 5) EXPECT_TRUE(out.empty()) << s;
  }
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].status, nmea::TargetStatus::kTracked);
  EXPECT_NEAR(out[0].bearing, 45, 1.0);
  EXPECT_NEAR(out[0].distance * kMetersPerNm, 5000, 20);
  EXPECT_NEAR(out[0].speed, 0, 0.5);
  for (int s = 6; s <= 13; ++s) {
    img.apply(blob(45, 5000, false), s * kScan);
    out = arpa.scan(img, own, s * kScan);
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out[0].status, nmea::TargetStatus::kTracked) << s;
  }
  img.apply(blob(45, 5000, false), 14 * kScan);
  out = arpa.scan(img, own, 14 * kScan);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].status, nmea::TargetStatus::kLost);
  EXPECT_TRUE(arpa.scan(img, own, 15 * kScan).empty());
}

TEST(Tracker, ClosingTargetBecomesDangerous) {
  PpiImage img;
  ArpaTracker arpa;
  const KinematicState own{{44.0, 8.0}, 0, 0, 0};
  const double v = 10 * kMpsPerKnot;
  nmea::TrackedTargetMessage last;
  for (int s = 1; s <= 40; ++s) {
    const double r = 2 * kMetersPerNm - v * to_seconds(s * kScan);
    img.apply(blob(0, r, true), s * kScan);
    const auto out = arpa.scan(img, own, s * kScan);
    if (!out.empty()) last = out.back();
  }
  ASSERT_EQ(last.status, nmea::TargetStatus::kTracked);
  EXPECT_NEAR(last.speed, 10, 1.0);
  EXPECT_LT(std::fabs(angle_diff(last.course, 180)), 5);
  const double r = 2 * kMetersPerNm - v * to_seconds(40 * kScan);
  EXPECT_NEAR(last.tcpa, r / v / 60, 1.0);
  EXPECT_LT(last.dcpa, 0.1);
  EXPECT_EQ(arpa.tracks()[0].status, TrackStatus::kDangerous);
}

}  // namespace
}  // namespace rtb
