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

#include "rtb/attack.hpp"
#include "rtb/geodesy.hpp"

namespace rtb {
namespace {

using attack::find;

// Points of the disc of radius r around (rho, theta), on a grid of pitch r/n.
int violations(const AnnulusSector& s, double rho, double theta, double r, int n = 40) {
  int bad = 0;
  const double t = deg2rad(theta);
  const double cx = rho * std::sin(t), cy = rho * std::cos(t);
  for (int i = -n; i <= n; ++i) {
    for (int j = -n; j <= n; ++j) {
      const double dx = r * i / n, dy = r * j / n;
      if (dx * dx + dy * dy > r * r) continue;
      const double x = cx + dx, y = cy + dy;
      if (!s.contains(std::hypot(x, y), c360(rad2deg(std::atan2(x, y))))) ++bad;
    }
  }
  // the exact tangent points too
  const double phi = std::asin(std::min(1.0, r / rho));
  for (double sgn : {-1.0, 1.0}) {
    const double a = t + sgn * phi, d = std::sqrt(std::max(0.0, rho * rho - r * r));
    if (!s.contains(d * (1 - 1e-12), c360(rad2deg(a)))) ++bad;
  }
  return bad;
}

TEST(Find, ZeroRangeIsWholeImage) {
  EXPECT_EQ(find(0, 123, 10, 10, 0.5), (AnnulusSector{0, 360, 0, kUnbounded}));
}

TEST(Find, MatchesClosedForm) {
  const AnnulusSector s = find(1000, 90, 30, 40, 0.2);
  const double rs = 25 * 1.2;
  EXPECT_NEAR(s.d_min, 1000 - rs, 1e-9);
  EXPECT_NEAR(s.d_max, 1000 + rs, 1e-9);
  EXPECT_NEAR(s.a_min, 90 - rad2deg(std::atan2(rs, 1000)), 1e-9);
  EXPECT_NEAR(s.a_max, 90 + rad2deg(std::atan2(rs, 1000)), 1e-9);
  const AnnulusSector wrap = find(1000, 0.5, 30, 40, 0.2);
  EXPECT_GT(wrap.a_min, 350);
  EXPECT_LT(wrap.a_max, 10);
  EXPECT_TRUE(wrap.contains(1000, 0.0));
  EXPECT_DOUBLE_EQ(find(10, 0, 30, 40, 0).d_min, 0.0);
}

// atan(r*/rho) covers the tangent half-angle asin(r/rho) when
// (1 + sm) >= 1 / sqrt(1 - (r/rho)^2).
TEST(Find, CoversBoundingCircleWhenMarginSuffices) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> rho(0.2 * kMetersPerNm, 12 * kMetersPerNm),
      theta(0, 360), w(5, 60), h(20, 400), sm(0, 1);
  int checked = 0;
  for (int i = 0; i < 3000 && checked < 1000; ++i) {
    const double p = rho(rng), th = theta(rng), ww = w(rng), hh = h(rng), m = sm(rng);
    const double r = std::hypot(ww, hh) / 2;
    if (r >= p || 1 + m < 1.0001 / std::sqrt(1 - (r / p) * (r / p))) continue;
    ++checked;
    ASSERT_EQ(violations(find(p, th, ww, hh, m), p, th, r), 0) << p << " " << th << " " << m;
  }
  EXPECT_EQ(checked, 1000);
}

TEST(Find, TangentPointsEscapeWithoutMargin) {
  // close and large: atan(r/rho) < asin(r/rho)
  EXPECT_GT(violations(find(400, 30, 50, 300, 0.0), 400, 30, std::hypot(50, 300) / 2), 0);
}

constexpr double kCellDur = 72383409e-15;

VideoMessage sweep(double az, std::uint32_t bias, std::vector<std::uint32_t> cells) {
  VideoMessage m;
  m.start_az = az;
  m.end_az = az + 1.0;
  m.center_bias = bias;
  m.cell_dur = kCellDur;
  m.cell_res = 8;
  m.n_cells = static_cast<std::uint32_t>(cells.size());
  m.cells = std::move(cells);
  return m;
}

TEST(DeleteSector, ZeroesAndShifts) {
  const double len = cell_length(kCellDur);
  const AnnulusSector s{5, 20, 2 * len, 4 * len};
  const auto out = attack::delete_sector(sweep(10, 0, {1, 2, 3, 4, 5, 6, 7, 8}), s);
  ASSERT_TRUE(out);
  EXPECT_EQ(out->center_bias, 1u);
  EXPECT_EQ(out->n_cells, 7u);
  // cells 1..4 touch [2len, 4len]; the first is then dropped by the shift
  EXPECT_EQ(out->cells, (std::vector<std::uint32_t>{0, 0, 0, 0, 6, 7, 8}));
  EXPECT_FALSE(attack::delete_sector(sweep(30, 0, {1, 2}), s));
  EXPECT_FALSE(attack::delete_sector(sweep(10, 100, {1, 2}), s));
}

TEST(Dos, EveryKthPacketFloodsTheImage) {
  int counter = 0;
  int sent = 0;
  for (int i = 0; i < 100; ++i) {
    const auto out = attack::dos(sweep(i % 360, 0, std::vector<std::uint32_t>(64, 3)), counter, 10);
    if (!out) continue;
    ++sent;
    EXPECT_EQ(out->start_az, 0.0);
    EXPECT_EQ(out->end_az, 0.0);
    EXPECT_EQ(out->n_cells, 4u);
    EXPECT_EQ(out->cells, std::vector<std::uint32_t>(4, 255));
    // same range coverage as the original
    EXPECT_NEAR(cell_length(out->cell_dur) * 4, cell_length(kCellDur) * 64, 1e-6);
  }
  EXPECT_EQ(sent, 10);
  EXPECT_THROW(attack::dos(sweep(0, 0, {1}), counter, 0), std::invalid_argument);
}

TEST(CopyShip, MovesEchoesByOffsets) {
  const double len = cell_length(kCellDur);
  const AnnulusSector s{5, 20, 2 * len, 4 * len};
  const auto out = attack::copy_ship(sweep(10, 0, {0, 0, 9, 8, 0, 0, 0, 0}), s, 15.0, 3 * len);
  ASSERT_TRUE(out);
  EXPECT_EQ(out->start_az, 25.0);
  EXPECT_EQ(out->cells, (std::vector<std::uint32_t>{0, 0, 9, 8, 0, 9, 8, 0}));
  // outside the sector nothing happens
  EXPECT_FALSE(attack::copy_ship(sweep(100, 0, {0, 0, 9}), s, 15.0, len));
}

TEST(Alter, WrapsUserFunction) {
  const AnnulusSector s{};
  const auto out = attack::alter(sweep(1, 0, {1}), s, [](const VideoMessage& p, const AnnulusSector&) {
    VideoMessage q = p;
    q.cells[0] = 42;
    return std::optional<VideoMessage>(q);
  });
  ASSERT_TRUE(out);
  EXPECT_EQ(out->cells[0], 42u);
  EXPECT_FALSE(attack::alter(sweep(1, 0, {1}), s, [](const VideoMessage&, const AnnulusSector&) {
    return std::optional<VideoMessage>();
  }));
}

TEST(Ghost, ControllerRespectsLimits) {
  attack::Trajectory t = attack::ghost_trajectory();
  t.initialize({44.0, 8.5}, 30.0);
  attack::GhostController c = attack::start_ghost(t, 3.0, 0.1, 1.0);
  c.speed_cmd = 14.0;
  for (int i = 0; i < 5000 && c.next < t.absolute.size(); ++i) {
    attack::steer(c, t);
    if (i < 20) c.speed_cmd = 14.0;
    const double cog = c.cog, sog = c.sog;
    attack::ghost_step(c);
    ASSERT_LE(std::fabs(angle_diff(c.cog, cog)), 3.0 + 1e-9);
    ASSERT_LE(std::fabs(c.sog - sog), 0.1 + 1e-9);
  }
  // captured the last waypoint
  EXPECT_EQ(c.next, t.absolute.size());
  EXPECT_LE(geo::inverse(c.x, t.absolute.back()).distance, c.capture_radius);
}

TEST(Ghost, WaypointsSitOnRequestedBearings) {
  attack::Trajectory t = attack::hijack_trajectory();
  const GeoPosition o{44.0, 8.5};
  t.initialize(o, 90.0);
  EXPECT_EQ(t.absolute[0].lat, o.lat);
  EXPECT_EQ(t.absolute[0].lon, o.lon);
  const auto inv = geo::inverse(o, t.absolute[1]);
  EXPECT_NEAR(inv.distance, 2372.0, 1e-3);
  EXPECT_NEAR(inv.azimuth, 90.0 + 51.3, 1e-6);
}

attack::ShipStateDb db_at(GeoPosition p, double heading, double sog) {
  attack::ShipStateDb db;
  db.own = {p, heading, sog, heading};
  db.have_position = db.have_heading = true;
  return db;
}

void add_contact(attack::ShipStateDb& db, std::uint32_t mmsi, double range, double rel,
                 double cog, double sog, Micros now) {
  attack::Contact c;
  c.state.position = polar_to_geo(db.own.position, db.own.heading, range, rel);
  c.state.cog = c.state.heading = cog;
  c.state.sog = sog;
  c.last_seen = now;
  db.contacts[mmsi] = c;
}

TEST(Trigger, GhostWantsTrafficOnlyToPort) {
  const Micros now = 1000000;
  auto db = db_at({44, 8}, 0, 10);
  add_contact(db, 1, 3 * kMetersPerNm, 270, 0, 10, now);
  EXPECT_FALSE(attack::trigger_ghost(db, now));
  add_contact(db, 2, 4 * kMetersPerNm, 300, 0, 10, now);
  EXPECT_TRUE(attack::trigger_ghost(db, now));
  add_contact(db, 3, 4 * kMetersPerNm, 45, 0, 10, now);
  EXPECT_FALSE(attack::trigger_ghost(db, now));
  db.contacts.erase(3);
  db.have_heading = false;
  EXPECT_FALSE(attack::trigger_ghost(db, now));
}

TEST(Trigger, OvertakeNeedsSlowerShipAhead) {
  const Micros now = 1000000;
  auto db = db_at({44, 8}, 0, 15);
  add_contact(db, 7, 2 * kMetersPerNm, 0, 0, 8, now);     // being overtaken
  add_contact(db, 8, 2 * kMetersPerNm, 5, 180, 8, now);   // head on
  add_contact(db, 9, 2 * kMetersPerNm, 10, 0, 20, now);   // faster
  add_contact(db, 10, 9 * kMetersPerNm, 0, 0, 5, now);    // too far
  EXPECT_EQ(attack::trigger_overtake(db, now), std::optional<std::uint32_t>(7));
  db.contacts.erase(7);
  EXPECT_FALSE(attack::trigger_overtake(db, now));
}

TEST(AisCreator, ReportsDecodeBack) {
  ais::StaticData dims;
  dims.bow = 20;
  dims.stern = 10;
  dims.port = 4;
  dims.starboard = 4;
  const auto parts = attack::ais_creator(247000001, {44.1, 8.6}, 123.4, 10.2, 42000000, dims);
  ais::VdmAssembler asm_;
  std::vector<ais::Report> got;
  for (const auto& s : parts)
    if (auto r = asm_.push(s)) got.push_back(*r);
  ASSERT_EQ(got.size(), 2u);
  const auto& pr = std::get<ais::PositionReport>(got[0]);
  EXPECT_EQ(pr.mmsi, 247000001u);
  EXPECT_NEAR(pr.lat, 44.1, ais::kLatLonLsb);
  EXPECT_NEAR(pr.lon, 8.6, ais::kLatLonLsb);
  EXPECT_NEAR(pr.cog, 123.4, 0.1);
  EXPECT_NEAR(pr.sog, 10.2, 0.1);
  EXPECT_EQ(pr.timestamp_s, 42);
  const auto& sd = std::get<ais::StaticData>(got[1]);
  EXPECT_EQ(sd.mmsi, 247000001u);
  EXPECT_EQ(sd.length(), 30);
  EXPECT_EQ(sd.width(), 8);
}

TEST(StateAwareness, LearnsContactsFromAis) {
  attack::ShipStateDb db;
  for (const auto& s : attack::ais_creator(5, {44.1, 8.6}, 90, 12, 1000000, std::nullopt))
    attack::state_awareness(db, s, 1000000);
  ASSERT_EQ(db.contacts.count(5), 1u);
  const KinematicState k = attack::contact_at(db.contacts[5], 61000000);
  // one minute at 12 kn due east
  EXPECT_NEAR(geo::inverse({44.1, 8.6}, k.position).distance, 12 * kMpsPerKnot * 60, 1.0);
}

}  // namespace
}  // namespace rtb
