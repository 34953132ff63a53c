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


#ifndef RTB_DETECTION_HPP_
#define RTB_DETECTION_HPP_

#include <cstdint>
#include <deque>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "rtb/asterix.hpp"
#include "rtb/sector.hpp"

namespace rtb {

inline bool operator<(const AntennaId& a, const AntennaId& b) {
  return std::tie(a.sac, a.sic, a.source_address) < std::tie(b.sac, b.sic, b.source_address);
}

namespace detect {

// Header values of one packet plus where it falls in the revolution being
// assembled (this packet included).
struct PacketData {
  double start_az = 0.0;
  double end_az = 0.0;
  double span = 0.0;
  std::uint32_t center_bias = 0;
  double cell_dur = 0.0;
  std::uint8_t cell_res = 0;
  std::uint32_t n_cells = 0;
  long long covered_m = 0;  // n_cells * cell length, whole meters
  std::uint32_t message_id = 0;
  double time_of_day = 0.0;
  Micros arrival = 0;

  std::uint32_t rev_entries = 0;
  double rev_position = 0.0;  // degrees swept since the revolution began
  bool opens_revolution = false;
  // closes_in_period of the aggregate this packet would close, 0 if none
  std::uint32_t closes_in_period = 0;
  std::optional<std::uint32_t> prev_message_id;
};

struct RevolutionAggregate {
  double mu_az = 0.0;
  double s_az = 0.0;  // biased sample variance
  std::uint32_t entries = 0;
  std::map<std::uint32_t, std::uint32_t> center_bias;
  std::map<std::uint32_t, std::uint32_t> n_cells;
  std::map<long long, std::uint32_t> covered_m;
  std::uint32_t regressions = 0;  // message_id steps backwards
  double duration = 0.0;          // seconds, first to last arrival
  Micros opened_at = 0;
  Micros closed_at = 0;
  std::uint32_t closes_in_period = 0;  // aggregates closed in (closed_at - period, closed_at]
};

using History = std::deque<RevolutionAggregate>;

struct Feature {
  AntennaId S;
  PacketData D;
  std::optional<RevolutionAggregate> A;
  std::shared_ptr<const History> An;
};

using FeatureSet = std::vector<Feature>;

enum class Verdict { kPass, kViolation, kUndecided };
enum class Activation { kTrue, kFalse, kUndecided };

struct ActivePolicy {
  std::string id;
  std::string description;
  std::map<std::string, double> params;
  std::function<Verdict(const Feature&)> predicate;
};

struct CandidatePolicy {
  std::string id;
  std::string description;
  std::map<std::string, double> params;
  std::function<Activation(const FeatureSet&)> activation;
  std::function<ActivePolicy(const FeatureSet&)> transform;
};

struct Anomaly {
  std::string policy_id;
  std::string description;
  AntennaId antenna;
  PacketData packet;
  AnnulusSector sector;
  Micros timestamp = 0;
};

std::string to_json_line(const Anomaly& a);

// ---- collector -------------------------------------------------------------

struct CollectorConfig {
  std::vector<AntennaId> antennas;
  std::size_t historian_depth = 120;
  double period = 10.0;  // seconds, for counting aggregates
};

class Collector {
 public:
  explicit Collector(CollectorConfig config);

  bool known(const AntennaId& s) const;

  // Feature of a packet as if it were accepted; nothing is stored yet.
  Feature analyze(const AntennaId& s, const VideoMessage& m, Micros arrival) const;

  // Accepts the packet behind `f` into the running aggregate. Returns true
  // when a revolution was closed.
  bool commit(const Feature& f);

  // F plus the latest feature of every other antenna.
  FeatureSet feature_set(const Feature& f) const;

  std::shared_ptr<const History> history(const AntennaId& s) const;

 private:
  struct Running {
    double sum = 0.0;
    double sum2 = 0.0;
    std::uint32_t entries = 0;
    double position = 0.0;
    double first_start = 0.0;
    double prev_start = -1.0;
    std::optional<std::uint32_t> last_id;
    bool partial = true;  // the first revolution is seen from the middle
    RevolutionAggregate agg;
    Micros first = 0;
    Micros last = 0;
  };
  struct State {
    Running running;
    std::shared_ptr<const History> history = std::make_shared<History>();
    std::optional<Feature> latest;
  };

  static bool wraps(const Running& r, double start_az);
  RevolutionAggregate close(const Running& r, const History& h, Micros at) const;

  CollectorConfig config_;
  std::map<AntennaId, State> state_;
};

// ---- policies --------------------------------------------------------------

struct PolicyParams {
  std::size_t window = 20;       // aggregates
  double alpha = 1e-6;           // deg^2 (or count^2) on the means
  double beta = 1e-6;            // on the variances
  double probability = 0.99;     // categorical dominance
  double sigmas = 3.0;
  double azimuth_quantum = 360.0 / 65536.0;  // one wire LSB
  double count_quantum = 0.5;                // half a packet
  std::size_t give_up = 4;       // statistical candidates fail after give_up*window
};

// Field of an aggregate that a categorical policy watches, and the
// matching per-packet value.
struct CategoricalField {
  std::string name;
  std::function<std::map<long long, std::uint32_t>(const RevolutionAggregate&)> histogram;
  std::function<long long(const PacketData&)> value;
};

CandidatePolicy categorical(std::string id, std::string description, CategoricalField field,
                            const PolicyParams& p);

// Per-aggregate (mean, variance) sample plus a test of one feature against
// the band [mean - h, mean + h].
struct StatisticalField {
  std::string name;
  std::function<std::pair<double, double>(const RevolutionAggregate&)> sample;
  std::function<Verdict(const Feature&, double mean, double half_width)> test;
  double quantum = 0.0;
  // Extra condition on the estimated mean before activating, if any.
  std::function<bool(double mean)> admissible;
};

CandidatePolicy statistical(std::string id, std::string description, StatisticalField field,
                            const PolicyParams& p);

std::vector<CandidatePolicy> builtin_candidates(const PolicyParams& p = {});

// Name -> factory registry; built-ins are preregistered.
class PolicyRegistry {
 public:
  using Factory = std::function<CandidatePolicy(const PolicyParams&)>;
  static PolicyRegistry& instance();
  void add(const std::string& id, Factory f);
  std::vector<std::string> ids() const;
  CandidatePolicy make(const std::string& id, const PolicyParams& p) const;

 private:
  PolicyRegistry();
  std::map<std::string, Factory> factories_;
};

// ---- evaluation ------------------------------------------------------------

std::vector<Anomaly> evaluate(const std::vector<ActivePolicy>& active, const Feature& f);

struct GenerateResult {
  std::vector<ActivePolicy> activated;
  std::vector<std::string> rejected;
  std::vector<std::string> warnings;
};

// Runs every candidate's activation on F_g. Undecided ones stay; decided
// ones leave the store for good.
GenerateResult generate(std::vector<CandidatePolicy>& candidates, const FeatureSet& fg);

class AnomalySink {
 public:
  AnomalySink() = default;
  explicit AnomalySink(const std::string& path);
  bool open() const { return out_.is_open() && out_.good(); }
  // False, with last_error() set, when the record could not be written.
  bool write(const Anomaly& a);
  void close() { out_.close(); }
  const std::string& last_error() const { return error_; }
  std::uint64_t failures() const { return failures_; }

 private:
  std::ofstream out_;
  std::string error_;
  std::uint64_t failures_ = 0;
};

struct DetectorConfig {
  CollectorConfig collector;
  PolicyParams params;
  std::vector<std::string> policies{"P1", "P2", "P3", "P4", "P5", "P6"};
};

struct PacketVerdict {
  std::vector<Anomaly> anomalies;
  bool decoded = true;
};

class Detector {
 public:
  explicit Detector(DetectorConfig config);

  PacketVerdict process(const std::vector<std::uint8_t>& bytes, const std::string& source,
                        Micros arrival);

  const std::vector<ActivePolicy>& active() const { return active_; }
  const std::vector<CandidatePolicy>& candidates() const { return candidates_; }
  const Collector& collector() const { return collector_; }
  // Arrival time at which each policy activated.
  const std::map<std::string, Micros>& activated_at() const { return activated_at_; }

 private:
  DetectorConfig config_;
  Collector collector_;
  std::vector<CandidatePolicy> candidates_;
  std::vector<ActivePolicy> active_;
  std::map<std::string, Micros> activated_at_;
};

}  // namespace detect
}  // namespace rtb

#endif  // RTB_DETECTION_HPP_
