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


// Experiment configuration and its YAML file format.

#ifndef RTB_SCENARIO_HPP_
#define RTB_SCENARIO_HPP_

#include <stdexcept>
#include <string>

#include "rtb/arpa.hpp"
#include "rtb/attack_engine.hpp"
#include "rtb/detection.hpp"
#include "rtb/ppi.hpp"
#include "rtb/render.hpp"
#include "rtb/simulator.hpp"
#include "rtb/transport.hpp"

namespace rtb {

struct ExperimentConfig {
  Scenario scenario;
  AttackConfig attack;
  bool detect = true;
  BusMode bus = BusMode::kInproc;
  UdpConfig udp;
  PpiConfig ppi;
  ArpaConfig arpa;
  detect::DetectorConfig detector;  // antennas default to the scenario's
  int frames_every = 0;             // revolutions; 0 = no frames
  RenderOptions render;
  std::string out_dir;  // empty = no artifacts
  bool capture = false;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Randomized scenario of the given kind, attack matching the kind.
ExperimentConfig default_config(ScenarioKind kind, std::uint64_t seed);

// Missing keys keep their defaults. A file without a victim is randomized
// from its seed and kind.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& yaml_text);
std::string dump_config(const ExperimentConfig& c);

}  // namespace rtb

#endif  // RTB_SCENARIO_HPP_
