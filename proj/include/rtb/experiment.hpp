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


// End-to-end runs: simulator -> (attacker) -> PPI/ARPA -> (detector).

#ifndef RTB_EXPERIMENT_HPP_
#define RTB_EXPERIMENT_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rtb/scenario.hpp"

namespace rtb {

struct PolicyHits {
  std::uint64_t attack = 0;
  std::uint64_t legit = 0;
};

struct TtmSample {
  double t = 0.0;  // seconds since the scenario start
  int target = 0;
  double distance = 0.0;  // nm
  double bearing = 0.0;
  double speed = 0.0;   // kn
  double course = 0.0;
  double dcpa = 0.0;    // nm
  double tcpa = 0.0;    // min
  char status = 'Q';
  bool dangerous = false;
};

struct ErrorSample {
  double t = 0.0;
  double course = 0.0;  // |ARPA - commanded|, degrees
  double speed = 0.0;   // knots
};

struct Perf {
  double wall_seconds = 0.0;
  double simulated_seconds = 0.0;
  double latency_mean = 0.0;  // seconds
  double latency_p99 = 0.0;
  double latency_max = 0.0;
  std::uint64_t over_budget = 0;
  std::uint64_t lost_datagrams = 0;  // udp mode only
};

struct RunResult {
  std::uint64_t seed = 0;
  ScenarioKind scenario = ScenarioKind::kClean;
  AttackKind attack = AttackKind::kNone;
  bool detect = false;
  double duration = 0.0;

  std::uint64_t legit_asterix = 0;
  std::uint64_t attack_asterix = 0;
  std::uint64_t legit_nmea = 0;
  std::uint64_t attack_nmea = 0;
  std::uint64_t legit_bytes = 0;   // both topics
  std::uint64_t attack_bytes = 0;

  std::uint64_t tp = 0, fn = 0, fp = 0, tn = 0;
  std::uint64_t decode_failures = 0;
  std::map<std::string, PolicyHits> policy;
  std::map<std::string, double> activated_at;  // seconds since start
  std::uint64_t anomalies_written = 0;
  std::uint64_t sink_failures = 0;

  std::vector<TtmSample> ttms;
  std::vector<TtmSample> subject;  // TTMs following the ghost
  std::vector<ErrorSample> errors;

  std::string phase = "idle";
  std::optional<double> triggered_at;
  std::optional<double> active_at;
  std::optional<std::uint32_t> target_mmsi;
  std::string delete_capability = "unknown";

  bool success = false;
  std::string outcome;

  std::uint64_t revolutions = 0;
  std::uint64_t frame_hash = 0;

  Perf perf;

  double traffic_ratio() const;
  double tp_rate() const;  // over attack packets, 0 when none
  double fp_rate() const;  // over legitimate packets
  double policy_pct(const std::string& id) const;  // % of attack packets
};

RunResult run_experiment(const ExperimentConfig& config);

// Pure function of the result; `perf` is left out unless asked for.
nlohmann::json to_json(const RunResult& r, bool with_perf = true);

// Writes report.json and tcpa.csv under `dir`.
void write_artifacts(const RunResult& r, const std::string& dir);

struct BatchResult {
  ScenarioKind kind = ScenarioKind::kClean;
  std::vector<RunResult> runs;

  double success_rate() const;
  double min_tp_rate() const;
  double max_fp_rate() const;
  double max_traffic_ratio() const;
  // Attack packets matched by a policy over all runs, percent.
  double policy_pct(const std::string& id) const;
};

// Seeds first_seed .. first_seed+n-1; `threads` 0 picks the core count.
BatchResult run_batch(ScenarioKind kind, int n, std::uint64_t first_seed, bool detect,
                      unsigned threads = 0,
                      const std::function<void(ExperimentConfig&)>& tweak = {});

nlohmann::json to_json(const BatchResult& b, bool with_perf = true);

// Success rules applied to a finished run.
bool dos_succeeded(const RunResult& r, std::string* why = nullptr);
bool ghost_succeeded(const RunResult& r, std::string* why = nullptr);
bool hijack_succeeded(const RunResult& r, std::string* why = nullptr);

// Means of finite TCPA values over consecutive windows of `window` seconds.
std::vector<double> window_means(const std::vector<TtmSample>& s, double window);

struct ReplayResult {
  std::uint64_t records = 0;
  std::uint64_t frames = 0;
  std::uint64_t anomalies = 0;
  std::uint64_t frame_hash = 0;
};

struct ReplayOptions {
  std::string frames_dir;   // one PPM per revolution when set
  bool detect = false;
  std::string anomaly_out;  // anomaly log written by the detector
  std::string anomaly_in;   // existing log whose sectors are highlighted
};

// Feeds a capture through the PPI, and the detector when asked.
ReplayResult replay_capture(const std::string& capture, const ExperimentConfig& config,
                            const ReplayOptions& opts);

}  // namespace rtb

#endif  // RTB_EXPERIMENT_HPP_
