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


#include "rtb/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <sstream>

namespace rtb {

namespace {

AttackKind attack_for(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::kDos: return AttackKind::kDos;
    case ScenarioKind::kGhost: return AttackKind::kGhost;
    case ScenarioKind::kHijack: return AttackKind::kHijack;
    case ScenarioKind::kClean: break;
  }
  return AttackKind::kNone;
}

template <typename T>
void get(const YAML::Node& n, const char* key, T& out) {
  if (n && n[key]) out = n[key].as<T>();
}

ShipSpec read_ship(const YAML::Node& n) {
  ShipSpec s;
  get(n, "name", s.name);
  get(n, "mmsi", s.mmsi);
  get(n, "lat", s.state.position.lat);
  get(n, "lon", s.state.position.lon);
  get(n, "course", s.state.cog);
  get(n, "speed", s.state.sog);
  s.state.heading = s.state.cog;
  get(n, "heading", s.state.heading);
  get(n, "bow", s.bow);
  get(n, "stern", s.stern);
  get(n, "port", s.port);
  get(n, "starboard", s.starboard);
  if (n["waypoints"])
    for (const auto& w : n["waypoints"])
      s.waypoints.push_back({w[0].as<double>(), w[1].as<double>()});
  if (s.state.sog < 0) throw ConfigError("ship " + s.name + ": negative speed");
  return s;
}

YAML::Node write_ship(const ShipSpec& s) {
  YAML::Node n;
  n["name"] = s.name;
  n["mmsi"] = s.mmsi;
  n["lat"] = s.state.position.lat;
  n["lon"] = s.state.position.lon;
  n["course"] = s.state.cog;
  n["speed"] = s.state.sog;
  n["heading"] = s.state.heading;
  n["bow"] = s.bow;
  n["stern"] = s.stern;
  n["port"] = s.port;
  n["starboard"] = s.starboard;
  for (const GeoPosition& w : s.waypoints) {
    YAML::Node p;
    p.push_back(w.lat);
    p.push_back(w.lon);
    p.SetStyle(YAML::EmitterStyle::Flow);
    n["waypoints"].push_back(p);
  }
  return n;
}

}  // namespace

ExperimentConfig default_config(ScenarioKind kind, std::uint64_t seed) {
  ExperimentConfig c;
  c.scenario = randomize(kind, seed);
  c.attack.kind = attack_for(kind);
  return c;
}

ExperimentConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
  try {
    std::uint64_t seed = 1;
    std::string kind = "clean";
    get(root, "seed", seed);
    get(root, "kind", kind);
    ExperimentConfig c = default_config(scenario_kind_from(kind), seed);
    Scenario& sc = c.scenario;

    if (root["victim"]) {
      sc.victim = read_ship(root["victim"]);
      sc.ships.clear();
      sc.overtaken = -1;
      for (const auto& s : root["ships"]) sc.ships.push_back(read_ship(s));
      get(root, "overtaken", sc.overtaken);
    }
    get(root, "duration", sc.duration);
    get(root, "warmup", sc.warmup);
    get(root, "start_tod", sc.start_tod);

    const YAML::Node a = root["antenna"];
    get(a, "rotation_period", sc.antenna.rotation_period);
    get(a, "bearing_resolution", sc.antenna.bearing_resolution);
    get(a, "range_resolution", sc.antenna.range_resolution);
    get(a, "range_scale_nm", sc.antenna.range_scale_nm);
    int sac = sc.antenna.sac, sic = sc.antenna.sic, res = sc.antenna.cell_res;
    get(a, "sac", sac);
    get(a, "sic", sic);
    get(a, "cell_res", res);
    sc.antenna.sac = static_cast<std::uint8_t>(sac);
    sc.antenna.sic = static_cast<std::uint8_t>(sic);
    sc.antenna.cell_res = static_cast<std::uint8_t>(res);
    get(a, "source", sc.antenna.source);
    (void)sc.antenna.n_bins();  // throws on a resolution that does not divide 360

    const YAML::Node r = root["rates"];
    get(r, "nav_hz", sc.rates.nav_hz);
    get(r, "ais_period", sc.rates.ais_period);
    get(r, "static_every", sc.rates.static_every);

    const YAML::Node at = root["attack"];
    if (at && at["kind"]) c.attack.kind = attack_kind_from(at["kind"].as<std::string>());
    get(at, "k", c.attack.k);
    get(at, "omega", c.attack.omega);
    get(at, "accel", c.attack.accel);
    get(at, "sm_pct", c.attack.sm_pct);
    get(at, "probe_revolutions", c.attack.probe_revolutions);
    get(at, "ghost_mmsi", c.attack.ghost_mmsi);

    const YAML::Node d = root["detection"];
    get(d, "enabled", c.detect);
    get(d, "window", c.detector.params.window);
    get(d, "alpha", c.detector.params.alpha);
    get(d, "beta", c.detector.params.beta);
    get(d, "probability", c.detector.params.probability);
    get(d, "sigmas", c.detector.params.sigmas);
    get(d, "historian_depth", c.detector.collector.historian_depth);
    get(d, "period", c.detector.collector.period);
    if (d && d["policies"]) c.detector.policies = d["policies"].as<std::vector<std::string>>();

    const YAML::Node p = root["ppi"];
    get(p, "quirk", c.ppi.quirk);
    get(p, "trail_length", c.ppi.trail_length);

    const YAML::Node ar = root["arpa"];
    get(ar, "cpa_limit", c.arpa.cpa_limit);
    get(ar, "tcpa_limit", c.arpa.tcpa_limit);
    get(ar, "gate", c.arpa.gate);

    if (sc.duration <= 0 || sc.warmup < 0) throw ConfigError("scenario: bad duration");
    return c;
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string dump_config(const ExperimentConfig& c) {
  const Scenario& sc = c.scenario;
  YAML::Node root;
  root["seed"] = sc.seed;
  root["kind"] = to_string(sc.kind);
  root["duration"] = sc.duration;
  root["warmup"] = sc.warmup;
  root["start_tod"] = sc.start_tod;
  YAML::Node a;
  a["rotation_period"] = sc.antenna.rotation_period;
  a["bearing_resolution"] = sc.antenna.bearing_resolution;
  a["range_resolution"] = sc.antenna.range_resolution;
  a["range_scale_nm"] = sc.antenna.range_scale_nm;
  a["sac"] = static_cast<int>(sc.antenna.sac);
  a["sic"] = static_cast<int>(sc.antenna.sic);
  a["cell_res"] = static_cast<int>(sc.antenna.cell_res);
  a["source"] = sc.antenna.source;
  root["antenna"] = a;
  YAML::Node r;
  r["nav_hz"] = sc.rates.nav_hz;
  r["ais_period"] = sc.rates.ais_period;
  r["static_every"] = sc.rates.static_every;
  root["rates"] = r;
  root["victim"] = write_ship(sc.victim);
  for (const ShipSpec& s : sc.ships) root["ships"].push_back(write_ship(s));
  root["overtaken"] = sc.overtaken;
  YAML::Node at;
  at["kind"] = to_string(c.attack.kind);
  at["k"] = c.attack.k;
  at["omega"] = c.attack.omega;
  at["accel"] = c.attack.accel;
  at["sm_pct"] = c.attack.sm_pct;
  at["probe_revolutions"] = c.attack.probe_revolutions;
  at["ghost_mmsi"] = c.attack.ghost_mmsi;
  root["attack"] = at;
  YAML::Node d;
  d["enabled"] = c.detect;
  d["window"] = c.detector.params.window;
  d["alpha"] = c.detector.params.alpha;
  d["beta"] = c.detector.params.beta;
  d["probability"] = c.detector.params.probability;
  d["sigmas"] = c.detector.params.sigmas;
  d["historian_depth"] = c.detector.collector.historian_depth;
  d["period"] = c.detector.collector.period;
  d["policies"] = c.detector.policies;
  root["detection"] = d;
  YAML::Node p;
  p["quirk"] = c.ppi.quirk;
  p["trail_length"] = c.ppi.trail_length;
  root["ppi"] = p;
  YAML::Node ar;
  ar["cpa_limit"] = c.arpa.cpa_limit;
  ar["tcpa_limit"] = c.arpa.tcpa_limit;
  ar["gate"] = c.arpa.gate;
  root["arpa"] = ar;
  YAML::Emitter out;
  out.SetDoublePrecision(12);
  out << root;
  return std::string(out.c_str()) + "\n";
}

}  // namespace rtb
