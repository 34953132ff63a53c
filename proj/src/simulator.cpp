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


#include "rtb/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "rtb/echo.hpp"

namespace rtb {

double ShipSpec::radius() const { return 0.5 * std::hypot(length(), width()); }

ais::StaticData ShipSpec::static_data() const {
  ais::StaticData d;
  d.mmsi = mmsi;
  d.name = name;
  d.callsign = "C" + std::to_string(mmsi % 100000);
  d.bow = bow;
  d.stern = stern;
  d.port = port;
  d.starboard = starboard;
  return d;
}

int AntennaSpec::n_bins() const {
  const double n = 360.0 / bearing_resolution;
  const auto r = static_cast<int>(std::lround(n));
  if (r < 1 || std::fabs(n - r) > 1e-9)
    throw std::invalid_argument("bearing resolution must divide 360");
  return r;
}

double AntennaSpec::cell_dur() const {
  return asterix::quantize_cell_dur(2.0 * range_resolution / kSpeedOfLight);
}

std::uint32_t AntennaSpec::n_cells() const {
  return static_cast<std::uint32_t>(range_scale_nm * kMetersPerNm / cell_length(cell_dur()));
}

const char* to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::kClean: return "clean";
    case ScenarioKind::kDos: return "dos";
    case ScenarioKind::kGhost: return "ghost";
    case ScenarioKind::kHijack: return "hijack";
  }
  return "?";
}

ScenarioKind scenario_kind_from(const std::string& s) {
  if (s == "clean" || s == "none") return ScenarioKind::kClean;
  if (s == "dos") return ScenarioKind::kDos;
  if (s == "ghost") return ScenarioKind::kGhost;
  if (s == "hijack") return ScenarioKind::kHijack;
  throw std::invalid_argument("unknown scenario kind: " + s);
}

namespace {

ShipSpec random_ship(std::mt19937_64& rng, std::uint32_t mmsi) {
  std::uniform_real_distribution<double> len(40.0, 160.0);
  ShipSpec s;
  s.mmsi = mmsi;
  s.name = "SHIP " + std::to_string(mmsi % 1000);
  const double l = len(rng);
  s.bow = static_cast<int>(std::lround(0.6 * l));
  s.stern = static_cast<int>(std::lround(0.4 * l));
  const int w = std::clamp(static_cast<int>(std::lround(l / 6.0)), 8, 30);
  s.port = w / 2;
  s.starboard = w - w / 2;
  return s;
}

}  // namespace

Scenario randomize(ScenarioKind kind, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  auto uniform = [&](double a, double b) { return a + (b - a) * u01(rng); };

  Scenario sc;
  sc.seed = seed;
  sc.kind = kind;
  switch (kind) {
    case ScenarioKind::kDos: sc.duration = 60.0; break;
    case ScenarioKind::kGhost: sc.duration = 120.0; break;
    case ScenarioKind::kHijack: sc.duration = 600.0; break;
    case ScenarioKind::kClean: sc.duration = 60.0; break;
  }

  sc.victim.name = "VICTIM";
  sc.victim.mmsi = 247000001;
  sc.victim.bow = 120;
  sc.victim.stern = 80;
  sc.victim.port = 16;
  sc.victim.starboard = 16;
  sc.victim.state.position = {44.0 + uniform(0.0, 0.5), 8.0 + uniform(0.0, 1.5)};
  sc.victim.state.cog = std::floor(uniform(0.0, 360.0) * 10.0) / 10.0;
  sc.victim.state.heading = sc.victim.state.cog;
  sc.victim.state.sog = 10.0;

  const int n = std::uniform_int_distribution<int>(2, 8)(rng);
  const GeoPosition origin = sc.victim.state.position;
  const double course = sc.victim.state.cog;
  for (int i = 0; i < n; ++i) {
    ShipSpec s = random_ship(rng, 247100000u + static_cast<std::uint32_t>(i));
    const double d = uniform(3.5, 5.0) * kMetersPerNm;
    double b = uniform(10.0, 80.0);
    // The ghost needs a clear starboard bow, so its traffic keeps to port.
    const bool port = kind == ScenarioKind::kGhost || u01(rng) < 0.5;
    if (port) b = -b;
    s.state.position = polar_to_geo(origin, course, d, c360(b));
    s.state.cog = course;
    s.state.heading = course;
    s.state.sog = uniform(2.0, 12.0);
    sc.ships.push_back(s);
  }

  if (kind == ScenarioKind::kHijack) {
    ShipSpec s = random_ship(rng, 247200000u);
    const double d = uniform(1.5, 2.5) * kMetersPerNm;
    const double b = uniform(-3.0, 3.0);
    s.state.position = polar_to_geo(origin, course, d, c360(b));
    s.state.cog = course;
    s.state.heading = course;
    s.state.sog = uniform(2.5, 5.0);
    sc.overtaken = static_cast<int>(sc.ships.size());
    sc.ships.push_back(s);
  }
  return sc;
}

World::World(Scenario scenario)
    : scenario_(std::move(scenario)),
      victim_(scenario_.victim),
      ships_(scenario_.ships),
      waypoint_(ships_.size() + 1, 0),
      now_(scenario_.start()),
      cell_dur_(scenario_.antenna.cell_dur()),
      n_cells_(scenario_.antenna.n_cells()),
      n_bins_(scenario_.antenna.n_bins()),
      next_nav_(scenario_.start()) {
  const double period = scenario_.rates.ais_period;
  const auto n = static_cast<double>(ships_.size());
  for (std::size_t i = 0; i < ships_.size(); ++i) {
    // Stagger the transmitters across the period.
    next_ais_.push_back(now_ + to_micros(period * (static_cast<double>(i) + 1.0) / (n + 1.0)));
    ais_count_.push_back(0);
  }
}

void World::follow_waypoints(ShipSpec& s, std::size_t& k) {
  while (k < s.waypoints.size()) {
    const geo::Inverse inv = geo::inverse(s.state.position, s.waypoints[k]);
    if (inv.distance > 50.0) {
      s.state.cog = c360(inv.azimuth);
      s.state.heading = s.state.cog;
      return;
    }
    ++k;
  }
}

void World::step(double dt) {
  if (!(dt > 0.0)) return;
  auto move = [&](ShipSpec& s, std::size_t& k) {
    if (!s.waypoints.empty()) follow_waypoints(s, k);
    s.state = advance(s.state, dt);
  };
  move(victim_, waypoint_.back());
  for (std::size_t i = 0; i < ships_.size(); ++i) move(ships_[i], waypoint_[i]);
  now_ += to_micros(dt);
}

void World::step_to(Micros t) {
  if (t <= now_) return;
  const Micros target = t;
  step(to_seconds(t - now_));
  now_ = target;
}

Micros World::message_time(long long m) const {
  const Micros period = scenario_.antenna.period_us();
  const long long rev = m / n_bins_;
  const long long bin = m % n_bins_;
  return scenario_.start() + rev * period + bin * period / n_bins_;
}

VideoMessage World::radar_message(long long m) const {
  const AntennaSpec& a = scenario_.antenna;
  const long long bin = m % n_bins_;
  VideoMessage msg;
  msg.sac = a.sac;
  msg.sic = a.sic;
  msg.message_id = static_cast<std::uint32_t>(m % asterix::kMessageIdModulus);
  msg.time_of_day = asterix::quantize_time_of_day(std::fmod(to_seconds(message_time(m)), 86400.0));
  msg.start_az = asterix::quantize_azimuth(static_cast<double>(bin) * a.bearing_resolution);
  msg.end_az = asterix::quantize_azimuth(c360(static_cast<double>(bin + 1) * a.bearing_resolution));
  msg.center_bias = 0;
  msg.cell_dur = cell_dur_;
  msg.cell_res = a.cell_res;
  msg.n_cells = n_cells_;
  msg.cells.assign(n_cells_, 0);
  const KinematicState& own = victim_.state;
  for (const ShipSpec& s : ships_) {
    const Polar p = geo_to_polar(own.position, own.heading, s.state.position);
    paint_binary(msg, Footprint{p.range, p.bearing, s.radius()});
  }
  return msg;
}

VideoMessage World::next_radar_message() {
  step_to(message_time(next_message_));
  return radar_message(next_message_++);
}

std::vector<VideoMessage> World::sweep() {
  std::vector<VideoMessage> out;
  out.reserve(static_cast<std::size_t>(n_bins_));
  for (int i = 0; i < n_bins_; ++i) out.push_back(next_radar_message());
  return out;
}

std::vector<TimedSentence> World::emit_sensors() {
  std::vector<TimedSentence> out;
  const double tod_base = 86400.0;
  const Micros nav_period = to_micros(1.0 / scenario_.rates.nav_hz);
  while (next_nav_ <= now_) {
    const double utc = std::fmod(to_seconds(next_nav_), tod_base);
    const KinematicState& v = victim_.state;
    nmea::Gga gga;
    gga.utc = utc;
    gga.position = v.position;
    out.push_back({next_nav_, nmea::to_sentence(gga)});
    out.push_back({next_nav_, nmea::to_sentence(nmea::Ths{v.heading, 'A'})});
    out.push_back({next_nav_, nmea::to_sentence(nmea::Vhw{v.heading, v.heading, v.sog})});
    next_nav_ += nav_period;
  }

  const Micros ais_period = to_micros(scenario_.rates.ais_period);
  std::vector<TimedSentence> ais;
  for (std::size_t i = 0; i < ships_.size(); ++i) {
    while (next_ais_[i] <= now_) {
      const ShipSpec& s = ships_[i];
      ais::PositionReport r;
      r.mmsi = s.mmsi;
      r.lat = s.state.position.lat;
      r.lon = s.state.position.lon;
      r.sog = s.state.sog;
      r.cog = s.state.cog;
      r.heading = std::round(s.state.heading);
      if (r.heading >= 360.0) r.heading -= 360.0;
      r.timestamp_s = static_cast<int>(std::fmod(to_seconds(next_ais_[i]), 60.0));
      for (auto& sen : ais::encode_vdm(r)) ais.push_back({next_ais_[i], std::move(sen)});
      if (ais_count_[i] % scenario_.rates.static_every == 0) {
        vdm_sequence_ = vdm_sequence_ % 9 + 1;
        for (auto& sen : ais::encode_vdm(s.static_data(), vdm_sequence_))
          ais.push_back({next_ais_[i], std::move(sen)});
      }
      ++ais_count_[i];
      next_ais_[i] += ais_period;
    }
  }
  std::stable_sort(ais.begin(), ais.end(),
                   [](const TimedSentence& a, const TimedSentence& b) { return a.time < b.time; });
  out.insert(out.end(), ais.begin(), ais.end());
  std::stable_sort(out.begin(), out.end(),
                   [](const TimedSentence& a, const TimedSentence& b) { return a.time < b.time; });
  return out;
}

}  // namespace rtb
