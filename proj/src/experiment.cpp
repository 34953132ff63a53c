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


#include "rtb/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>
#include <set>
#include <unordered_set>

#include "rtb/arpa.hpp"
#include "rtb/capture.hpp"
#include "rtb/nmea.hpp"

namespace rtb {

namespace fs = std::filesystem;

namespace {

constexpr char kNmeaSource[] = "10.0.0.20:10110";
constexpr char kArpaSource[] = "10.0.0.10:10110";
constexpr double kSubjectRadius = 500.0;  // meters between a TTM and the ghost
constexpr double kTcpaWindow = 20.0;      // seconds
constexpr int kAttackerTag = 1;

std::uint64_t fnv1a(const std::vector<std::uint8_t>& bytes, std::uint64_t h = 1469598103934665603ull) {
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xff;
    h *= 1099511628211ull;
  }
  return h;
}

double wall_now() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

char status_char(nmea::TargetStatus s) {
  switch (s) {
    case nmea::TargetStatus::kTracked: return 'T';
    case nmea::TargetStatus::kLost: return 'L';
    case nmea::TargetStatus::kAcquiring: break;
  }
  return 'Q';
}

std::vector<std::uint8_t> bytes_of(const std::string& s) { return {s.begin(), s.end()}; }

class Pipeline {
 public:
  explicit Pipeline(const ExperimentConfig& c);
  RunResult run();

 private:
  using Handler = void (Pipeline::*)(const Datagram&);

  void publish_legit(Topic topic, std::vector<std::uint8_t> payload, const std::string& source,
                     Micros time);
  void drain(Subscription& sub, Topic topic, std::uint64_t& received, Handler h);
  std::uint64_t published(Topic t) const;
  void pump();
  void attacker_receive(const Datagram& d) { engine_->on_datagram(d); }
  void victim_asterix(const Datagram& d);
  void victim_nmea(const Datagram& d);
  void end_of_revolution();
  void finish();

  ExperimentConfig config_;
  World world_;
  std::unique_ptr<Bus> bus_;
  bool udp_;
  Micros now_ = 0;

  std::shared_ptr<Subscription> atk_asterix_, atk_nmea_, vic_asterix_, vic_nmea_;
  std::uint64_t atk_rx_[2] = {0, 0};
  std::uint64_t vic_rx_[2] = {0, 0};
  std::uint64_t legit_pub_[2] = {0, 0};

  std::unique_ptr<AttackEngine> engine_;
  PpiImage ppi_;
  ArpaTracker arpa_;
  std::unique_ptr<detect::Detector> detector_;
  std::unique_ptr<detect::AnomalySink> sink_;
  std::unique_ptr<CaptureWriter> capture_;

  std::unordered_multiset<std::uint64_t> legit_asterix_;
  std::unordered_multiset<std::uint64_t> legit_nmea_;
  std::vector<AnnulusSector> highlights_;

  RunResult r_;
};

Pipeline::Pipeline(const ExperimentConfig& c)
    : config_(c),
      world_(c.scenario),
      bus_(open_bus(c.bus, c.udp)),
      udp_(c.bus == BusMode::kUdp),
      ppi_([&] {
        PpiConfig p = c.ppi;
        p.rotation_period = c.scenario.antenna.rotation_period;
        p.bearing_resolution = c.scenario.antenna.bearing_resolution;
        p.range_scale = c.scenario.antenna.range_scale_nm * kMetersPerNm;
        return p;
      }()),
      arpa_([&] {
        ArpaConfig a = c.arpa;
        a.range_resolution = c.scenario.antenna.range_resolution;
        a.n_cells = c.scenario.antenna.n_cells();
        return a;
      }()) {
  const Scenario& sc = c.scenario;
  if (c.attack.kind != AttackKind::kNone) {
    atk_asterix_ = bus_->subscribe(Topic::kAsterix);
    atk_nmea_ = bus_->subscribe(Topic::kNmea);
    AttackConfig ac = c.attack;
    ac.arm_at = sc.attack_start();
    ac.rotation_period = sc.antenna.rotation_period;
    ac.bin_width = sc.antenna.bearing_resolution;
    engine_ = std::make_unique<AttackEngine>(ac, *bus_, kAttackerTag);
  }
  vic_asterix_ = bus_->subscribe(Topic::kAsterix);
  vic_nmea_ = bus_->subscribe(Topic::kNmea);

  if (c.detect) {
    detect::DetectorConfig dc = c.detector;
    if (dc.collector.antennas.empty())
      dc.collector.antennas.push_back(
          AntennaId{sc.antenna.sac, sc.antenna.sic, udp_ ? std::string() : sc.antenna.source});
    detector_ = std::make_unique<detect::Detector>(dc);
  }
  if (!c.out_dir.empty()) {
    fs::create_directories(c.out_dir);
    if (c.detect) {
      const std::string log = (fs::path(c.out_dir) / "anomalies.jsonl").string();
      fs::remove(log);
      sink_ = std::make_unique<detect::AnomalySink>(log);
    }
    if (c.capture)
      capture_ = std::make_unique<CaptureWriter>((fs::path(c.out_dir) / "capture.rhcap").string());
    if (c.frames_every > 0) fs::create_directories(fs::path(c.out_dir) / "frames");
  }

  r_.seed = sc.seed;
  r_.scenario = sc.kind;
  r_.attack = c.attack.kind;
  r_.detect = c.detect;
  r_.duration = sc.duration;
  if (detector_)
    for (const std::string& id : c.detector.policies) r_.policy[id];
}

void Pipeline::publish_legit(Topic topic, std::vector<std::uint8_t> payload,
                             const std::string& source, Micros time) {
  const std::uint64_t h = fnv1a(payload);
  (topic == Topic::kAsterix ? legit_asterix_ : legit_nmea_).insert(h);
  ++legit_pub_[static_cast<int>(topic)];
  bus_->publish(Datagram{topic, std::move(payload), source, time, 0});
}

std::uint64_t Pipeline::published(Topic t) const {
  std::uint64_t n = legit_pub_[static_cast<int>(t)];
  if (engine_)
    n += t == Topic::kAsterix ? engine_->stats().asterix_packets : engine_->stats().nmea_sentences;
  return n;
}

void Pipeline::drain(Subscription& sub, Topic topic, std::uint64_t& received, Handler h) {
  for (;;) {
    std::optional<Datagram> d = sub.poll();
    if (!d && udp_) {
      if (received >= published(topic)) return;
      d = sub.wait_for(std::chrono::milliseconds(200));
      if (!d) {
        r_.perf.lost_datagrams += published(topic) - received;
        received = published(topic);
        return;
      }
    }
    if (!d) return;
    ++received;
    if (udp_) {
      // Nothing but the payload survives the wire; the loop is lock-step.
      d->time = now_;
    }
    (this->*h)(*d);
  }
}

void Pipeline::pump() {
  if (engine_) {
    while (true) {
      drain(*atk_nmea_, Topic::kNmea, atk_rx_[1], &Pipeline::attacker_receive);
      drain(*atk_asterix_, Topic::kAsterix, atk_rx_[0], &Pipeline::attacker_receive);
      if (atk_nmea_->pending() == 0 && atk_asterix_->pending() == 0 &&
          (!udp_ || (atk_rx_[0] >= published(Topic::kAsterix) &&
                     atk_rx_[1] >= published(Topic::kNmea))))
        break;
    }
  }
  drain(*vic_nmea_, Topic::kNmea, vic_rx_[1], &Pipeline::victim_nmea);
  drain(*vic_asterix_, Topic::kAsterix, vic_rx_[0], &Pipeline::victim_asterix);
}

void Pipeline::victim_nmea(const Datagram& d) {
  auto it = legit_nmea_.find(fnv1a(d.payload));
  if (it != legit_nmea_.end()) {
    legit_nmea_.erase(it);
    ++r_.legit_nmea;
    r_.legit_bytes += d.payload.size();
  } else {
    ++r_.attack_nmea;
    r_.attack_bytes += d.payload.size();
  }
  if (capture_) capture_->write(d);
}

void Pipeline::victim_asterix(const Datagram& d) {
  auto it = legit_asterix_.find(fnv1a(d.payload));
  const bool legit = it != legit_asterix_.end();
  if (legit) {
    legit_asterix_.erase(it);
    ++r_.legit_asterix;
    r_.legit_bytes += d.payload.size();
  } else {
    ++r_.attack_asterix;
    r_.attack_bytes += d.payload.size();
  }
  if (capture_) capture_->write(d);

  try {
    ppi_.apply(asterix::decode(d.payload), d.time);
  } catch (const asterix::CodecError&) {
  }

  if (!detector_) return;
  const detect::PacketVerdict v = detector_->process(d.payload, d.source, d.time);
  if (!v.decoded) ++r_.decode_failures;
  const bool flagged = !v.anomalies.empty();
  if (legit) flagged ? ++r_.fp : ++r_.tn;
  else flagged ? ++r_.tp : ++r_.fn;
  std::set<std::string> seen;
  for (const detect::Anomaly& a : v.anomalies) {
    if (!seen.insert(a.policy_id).second) continue;
    PolicyHits& h = r_.policy[a.policy_id];
    legit ? ++h.legit : ++h.attack;
    if (config_.frames_every > 0) highlights_.push_back(a.sector);
  }
  if (sink_)
    for (const detect::Anomaly& a : v.anomalies) {
      if (sink_->write(a)) ++r_.anomalies_written;
      else ++r_.sink_failures;
    }
}

void Pipeline::end_of_revolution() {
  const ShipSpec& own = world_.victim();
  const Micros start = config_.scenario.start();
  const auto ttms = arpa_.scan(ppi_, own.state, now_);
  const std::optional<GhostSample> ghost =
      engine_ && engine_->ghost_running() ? engine_->ghost_at(now_) : std::nullopt;
  for (const nmea::TrackedTargetMessage& t : ttms) {
    publish_legit(Topic::kNmea, bytes_of(nmea::to_wire(nmea::to_sentence(t))), kArpaSource,
                  now_);
    TtmSample s;
    s.t = to_seconds(now_ - start);
    s.target = t.target_id;
    s.distance = t.distance;
    s.bearing = t.bearing;
    s.speed = t.speed;
    s.course = t.course;
    s.dcpa = t.dcpa;
    s.tcpa = t.tcpa;
    s.status = status_char(t.status);
    s.dangerous = t.status != nmea::TargetStatus::kLost && t.dcpa < config_.arpa.cpa_limit &&
                  t.tcpa >= 0.0 && t.tcpa < config_.arpa.tcpa_limit;
    r_.ttms.push_back(s);
    if (ghost && t.status != nmea::TargetStatus::kLost) {
      const GeoPosition p =
          polar_to_geo(own.state.position, 0.0, t.distance * kMetersPerNm, t.bearing);
      if (geo::inverse(p, ghost->position).distance <= kSubjectRadius) {
        r_.subject.push_back(s);
        if (t.status == nmea::TargetStatus::kTracked)
          r_.errors.push_back({s.t, std::abs(angle_diff(t.course, ghost->course_cmd)),
                               std::abs(t.speed - ghost->speed_cmd)});
      }
    }
  }

  ppi_.set_heading(own.state.heading);
  r_.frame_hash = mix(r_.frame_hash == 0 ? 1469598103934665603ull : r_.frame_hash, ppi_.hash());
  if (config_.render.trails) ppi_.push_trail();
  if (config_.frames_every > 0 && !config_.out_dir.empty() &&
      r_.revolutions % static_cast<std::uint64_t>(config_.frames_every) == 0) {
    RenderOptions opts = config_.render;
    opts.highlights = highlights_;
    char name[32];
    std::snprintf(name, sizeof name, "frame_%06llu.ppm",
                  static_cast<unsigned long long>(r_.revolutions));
    write_ppm(render(ppi_, opts), (fs::path(config_.out_dir) / "frames" / name).string());
  }
  highlights_.clear();
  ++r_.revolutions;
}

RunResult Pipeline::run() {
  const double wall0 = wall_now();
  const Scenario& sc = config_.scenario;
  const int n_bins = sc.antenna.n_bins();
  while (world_.message_time(world_.next_message()) < sc.end()) {
    const VideoMessage msg = world_.next_radar_message();
    now_ = world_.now();
    for (const TimedSentence& s : world_.emit_sensors())
      publish_legit(Topic::kNmea, bytes_of(nmea::to_wire(s.sentence)), kNmeaSource, s.time);
    publish_legit(Topic::kAsterix, asterix::encode(msg), sc.antenna.source, now_);
    pump();
    if (world_.next_message() % n_bins == 0) {
      end_of_revolution();
      pump();
    }
  }
  finish();
  r_.perf.wall_seconds = wall_now() - wall0;
  r_.perf.simulated_seconds = sc.warmup + sc.duration;
  return std::move(r_);
}

void Pipeline::finish() {
  const Micros start = config_.scenario.start();
  if (detector_)
    for (const auto& [id, t] : detector_->activated_at())
      r_.activated_at[id] = to_seconds(t - start);
  if (capture_) capture_->flush();
  if (engine_) {
    const AttackStats& st = engine_->stats();
    r_.phase = to_string(engine_->phase());
    if (st.triggered_at) r_.triggered_at = to_seconds(*st.triggered_at - start);
    if (st.active_at) r_.active_at = to_seconds(*st.active_at - start);
    r_.target_mmsi = st.target_mmsi;
    switch (engine_->db().delete_capability) {
      case attack::Capability::kGranted: r_.delete_capability = "granted"; break;
      case attack::Capability::kDenied: r_.delete_capability = "denied"; break;
      default: r_.delete_capability = "unknown"; break;
    }
    if (!st.latencies.empty()) {
      std::vector<double> l = st.latencies;
      std::sort(l.begin(), l.end());
      r_.perf.latency_mean = std::accumulate(l.begin(), l.end(), 0.0) / l.size();
      r_.perf.latency_p99 = l[std::min(l.size() - 1, static_cast<std::size_t>(0.99 * l.size()))];
      r_.perf.latency_max = l.back();
    }
    r_.perf.over_budget = st.over_budget;
  }
  switch (r_.attack) {
    case AttackKind::kDos: r_.success = dos_succeeded(r_, &r_.outcome); break;
    case AttackKind::kGhost: r_.success = ghost_succeeded(r_, &r_.outcome); break;
    case AttackKind::kHijack: r_.success = hijack_succeeded(r_, &r_.outcome); break;
    case AttackKind::kNone:
      r_.success = true;
      r_.outcome = "no attack";
      break;
  }
}

double ratio(std::uint64_t a, std::uint64_t b) {
  return b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b);
}

void set_why(std::string* why, std::string s) {
  if (why) *why = std::move(s);
}

}  // namespace

double RunResult::traffic_ratio() const { return ratio(attack_bytes, attack_bytes + legit_bytes); }
double RunResult::tp_rate() const { return ratio(tp, tp + fn); }
double RunResult::fp_rate() const { return ratio(fp, fp + tn); }
double RunResult::policy_pct(const std::string& id) const {
  auto it = policy.find(id);
  return it == policy.end() ? 0.0 : 100.0 * ratio(it->second.attack, tp + fn);
}

RunResult run_experiment(const ExperimentConfig& config) {
  Pipeline p(config);
  return p.run();
}

std::vector<double> window_means(const std::vector<TtmSample>& s, double window) {
  std::vector<double> out;
  std::optional<double> t0;
  long long current = -1;
  double sum = 0.0;
  int n = 0;
  for (const TtmSample& x : s) {
    if (!std::isfinite(x.tcpa)) continue;
    if (!t0) t0 = x.t;
    const long long w = static_cast<long long>(std::floor((x.t - *t0) / window));
    if (w != current && n > 0) {
      out.push_back(sum / n);
      sum = 0.0;
      n = 0;
    }
    current = w;
    sum += x.tcpa;
    ++n;
  }
  if (n > 0) out.push_back(sum / n);
  return out;
}

bool dos_succeeded(const RunResult& r, std::string* why) {
  const double from = r.active_at.value_or(r.duration);
  std::map<int, const TtmSample*> last;
  std::set<int> tracked;
  for (const TtmSample& s : r.ttms) {
    if (s.t >= from) {
      if (s.status == 'L' && tracked.count(s.target)) {
        set_why(why, "track " + std::to_string(s.target) + " lost");
        return true;
      }
      if (s.status != 'L' && s.speed * kMpsPerKnot >= 100.0) {
        set_why(why, "track " + std::to_string(s.target) + " reported speed >= 100 m/s");
        return true;
      }
      auto it = last.find(s.target);
      if (it != last.end() && s.status != 'L' && s.t > it->second->t) {
        const double acc = std::abs(s.speed - it->second->speed) * kMpsPerKnot / (s.t - it->second->t);
        if (acc >= 10.0) {
          set_why(why, "track " + std::to_string(s.target) + " reported acceleration >= 10 m/s^2");
          return true;
        }
      }
    }
    if (s.status == 'T') tracked.insert(s.target);
    if (s.status != 'L') last[s.target] = &s;
  }
  set_why(why, "every track kept plausible kinematics");
  return false;
}

bool ghost_succeeded(const RunResult& r, std::string* why) {
  if (r.subject.empty()) {
    set_why(why, "ghost never reported by ARPA");
    return false;
  }
  const bool acquired = std::any_of(r.subject.begin(), r.subject.end(),
                                    [](const TtmSample& s) { return s.status == 'T'; });
  const bool dangerous = std::any_of(r.subject.begin(), r.subject.end(),
                                     [](const TtmSample& s) { return s.dangerous; });
  const std::vector<double> m = window_means(r.subject, kTcpaWindow);
  bool decreasing = m.size() >= 2;
  for (std::size_t i = 1; i < m.size(); ++i) decreasing = decreasing && m[i] < m[i - 1];
  if (!acquired) return set_why(why, "ghost never tracked"), false;
  if (!dangerous) return set_why(why, "ghost never dangerous"), false;
  if (!decreasing) return set_why(why, "TCPA not strictly decreasing"), false;
  if (m.back() >= ArpaConfig{}.tcpa_limit)
    return set_why(why, "TCPA still above the alarm"), false;
  set_why(why, "ghost dangerous, TCPA decreasing below the alarm");
  return true;
}

bool hijack_succeeded(const RunResult& r, std::string* why) {
  if (r.delete_capability != "granted") {
    set_why(why, "delete capability " + r.delete_capability);
    return false;
  }
  for (const TtmSample& s : r.subject)
    if (std::isfinite(s.tcpa) && s.tcpa < 0.0) {
      set_why(why, "overtaken target TCPA negative at t=" + std::to_string(s.t));
      return true;
    }
  set_why(why, "TCPA never negative");
  return false;
}

nlohmann::json to_json(const RunResult& r, bool with_perf) {
  using nlohmann::json;
  json j;
  j["seed"] = r.seed;
  j["scenario"] = to_string(r.scenario);
  j["attack"] = to_string(r.attack);
  j["detect"] = r.detect;
  j["duration_s"] = r.duration;
  j["packets"] = {{"legit_asterix", r.legit_asterix}, {"attack_asterix", r.attack_asterix},
                  {"legit_nmea", r.legit_nmea},       {"attack_nmea", r.attack_nmea},
                  {"legit_bytes", r.legit_bytes},     {"attack_bytes", r.attack_bytes},
                  {"traffic_ratio", r.traffic_ratio()}};
  if (r.detect) {
    json pol = json::object();
    for (const auto& [id, h] : r.policy)
      pol[id] = {{"attack", h.attack}, {"legit", h.legit}, {"attack_pct", r.policy_pct(id)}};
    j["detection"] = {{"tp", r.tp},
                      {"fn", r.fn},
                      {"fp", r.fp},
                      {"tn", r.tn},
                      {"tp_rate", r.tp_rate()},
                      {"fp_rate", r.fp_rate()},
                      {"decode_failures", r.decode_failures},
                      {"policies", pol},
                      {"activated_at_s", r.activated_at},
                      {"anomalies_written", r.anomalies_written},
                      {"sink_failures", r.sink_failures}};
  }
  json atk = {{"phase", r.phase}, {"delete_capability", r.delete_capability}};
  if (r.triggered_at) atk["triggered_at_s"] = *r.triggered_at;
  if (r.active_at) atk["active_at_s"] = *r.active_at;
  if (r.target_mmsi) atk["target_mmsi"] = *r.target_mmsi;
  j["attack_state"] = atk;
  j["success"] = r.success;
  j["outcome"] = r.outcome;

  std::size_t course1 = 0;
  double course_max = 0.0, speed_max = 0.0;
  for (const ErrorSample& e : r.errors) {
    course1 += e.course <= 1.0;
    course_max = std::max(course_max, e.course);
    speed_max = std::max(speed_max, e.speed);
  }
  j["accuracy"] = {{"samples", r.errors.size()},
                   {"course_max_deg", course_max},
                   {"speed_max_kn", speed_max},
                   {"course_within_1deg", ratio(course1, r.errors.size())}};
  json tcpa = json::array();
  for (const double m : window_means(r.subject, kTcpaWindow)) tcpa.push_back(m);
  j["subject_tcpa_window_means_min"] = tcpa;
  j["ttm_count"] = r.ttms.size();
  j["revolutions"] = r.revolutions;
  std::ostringstream hash;
  hash << std::hex << std::setw(16) << std::setfill('0') << r.frame_hash;
  j["frame_hash"] = hash.str();
  if (with_perf)
    j["perf"] = {{"wall_s", r.perf.wall_seconds},
                 {"simulated_s", r.perf.simulated_seconds},
                 {"speedup", ratio(static_cast<std::uint64_t>(r.perf.simulated_seconds * 1e6),
                                   static_cast<std::uint64_t>(r.perf.wall_seconds * 1e6))},
                 {"latency_mean_s", r.perf.latency_mean},
                 {"latency_p99_s", r.perf.latency_p99},
                 {"latency_max_s", r.perf.latency_max},
                 {"over_budget", r.perf.over_budget},
                 {"lost_datagrams", r.perf.lost_datagrams}};
  return j;
}

void write_artifacts(const RunResult& r, const std::string& dir) {
  fs::create_directories(dir);
  std::ofstream rep(fs::path(dir) / "report.json");
  rep << to_json(r).dump(2) << '\n';
  std::ofstream csv(fs::path(dir) / "tcpa.csv");
  csv << "t_s,target,distance_nm,bearing_deg,speed_kn,course_deg,dcpa_nm,tcpa_min,status,"
         "dangerous,subject\n";
  std::size_t k = 0;
  for (const TtmSample& s : r.ttms) {
    const bool subject = k < r.subject.size() && r.subject[k].t == s.t &&
                         r.subject[k].target == s.target;
    if (subject) ++k;
    csv << s.t << ',' << s.target << ',' << s.distance << ',' << s.bearing << ',' << s.speed
        << ',' << s.course << ',' << s.dcpa << ',' << s.tcpa << ',' << s.status << ','
        << s.dangerous << ',' << subject << '\n';
  }
}

double BatchResult::success_rate() const {
  std::size_t ok = 0;
  for (const RunResult& r : runs) ok += r.success;
  return ratio(ok, runs.size());
}

double BatchResult::min_tp_rate() const {
  double m = 1.0;
  for (const RunResult& r : runs) m = std::min(m, r.tp_rate());
  return m;
}

double BatchResult::max_fp_rate() const {
  double m = 0.0;
  for (const RunResult& r : runs) m = std::max(m, r.fp_rate());
  return m;
}

double BatchResult::max_traffic_ratio() const {
  double m = 0.0;
  for (const RunResult& r : runs) m = std::max(m, r.traffic_ratio());
  return m;
}

double BatchResult::policy_pct(const std::string& id) const {
  std::uint64_t hit = 0, total = 0;
  for (const RunResult& r : runs) {
    total += r.tp + r.fn;
    if (auto it = r.policy.find(id); it != r.policy.end()) hit += it->second.attack;
  }
  return 100.0 * ratio(hit, total);
}

BatchResult run_batch(ScenarioKind kind, int n, std::uint64_t first_seed, bool detect,
                      unsigned threads, const std::function<void(ExperimentConfig&)>& tweak) {
  BatchResult b;
  b.kind = kind;
  b.runs.resize(static_cast<std::size_t>(std::max(n, 0)));
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  std::mutex mu;
  std::size_t next = 0;
  std::exception_ptr error;
  auto worker = [&] {
    for (;;) {
      std::size_t i;
      {
        std::lock_guard lock(mu);
        if (next >= b.runs.size() || error) return;
        i = next++;
      }
      try {
        ExperimentConfig c = default_config(kind, first_seed + i);
        c.detect = detect;
        if (tweak) tweak(c);
        b.runs[i] = run_experiment(c);
      } catch (...) {
        std::lock_guard lock(mu);
        error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < std::min<std::size_t>(threads, b.runs.size()); ++t)
    pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return b;
}

nlohmann::json to_json(const BatchResult& b, bool with_perf) {
  using nlohmann::json;
  json j;
  j["scenario"] = to_string(b.kind);
  j["runs"] = b.runs.size();
  j["success_rate"] = b.success_rate();
  j["min_tp_rate"] = b.min_tp_rate();
  j["max_fp_rate"] = b.max_fp_rate();
  j["max_traffic_ratio"] = b.max_traffic_ratio();
  json pol = json::object();
  for (const std::string& id : detect::PolicyRegistry::instance().ids())
    pol[id] = b.policy_pct(id);
  j["policy_attack_pct"] = pol;
  json runs = json::array();
  for (const RunResult& r : b.runs) runs.push_back(to_json(r, with_perf));
  j["per_run"] = runs;
  return j;
}

ReplayResult replay_capture(const std::string& capture, const ExperimentConfig& config,
                            const ReplayOptions& ro) {
  const std::string& frames_dir = ro.frames_dir;
  const bool detect = ro.detect;
  const std::string& anomaly_log = ro.anomaly_out;
  std::vector<std::pair<Micros, AnnulusSector>> marked;
  if (!ro.anomaly_in.empty()) {
    std::ifstream in(ro.anomaly_in);
    if (!in) throw std::runtime_error("cannot read " + ro.anomaly_in);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto j = nlohmann::json::parse(line);
      const auto& s = j.at("sector");
      marked.push_back({j.at("timestamp_us").get<Micros>(),
                        AnnulusSector{s.at("a_min").get<double>(), s.at("a_max").get<double>(),
                                      s.at("d_min").get<double>(), s.at("d_max").get<double>()}});
    }
    std::sort(marked.begin(), marked.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
  }
  std::size_t next_mark = 0;
  const Scenario& sc = config.scenario;
  PpiConfig pc = config.ppi;
  pc.rotation_period = sc.antenna.rotation_period;
  pc.bearing_resolution = sc.antenna.bearing_resolution;
  pc.range_scale = sc.antenna.range_scale_nm * kMetersPerNm;
  PpiImage ppi(pc);
  std::unique_ptr<detect::Detector> detector;
  if (detect) {
    detect::DetectorConfig dc = config.detector;
    // A capture keeps no source address.
    if (dc.collector.antennas.empty())
      dc.collector.antennas.push_back(AntennaId{sc.antenna.sac, sc.antenna.sic, ""});
    detector = std::make_unique<detect::Detector>(dc);
  }
  std::unique_ptr<detect::AnomalySink> sink;
  if (!anomaly_log.empty()) {
    fs::remove(anomaly_log);
    sink = std::make_unique<detect::AnomalySink>(anomaly_log);
  }
  if (!frames_dir.empty()) fs::create_directories(frames_dir);

  ReplayResult out;
  std::vector<AnnulusSector> highlights;
  std::optional<double> last_start;
  auto flush_frame = [&] {
    out.frame_hash = mix(out.frame_hash == 0 ? 1469598103934665603ull : out.frame_hash, ppi.hash());
    if (!frames_dir.empty()) {
      RenderOptions opts = config.render;
      opts.highlights = highlights;
      char name[32];
      std::snprintf(name, sizeof name, "frame_%06llu.ppm", static_cast<unsigned long long>(out.frames));
      write_ppm(render(ppi, opts), (fs::path(frames_dir) / name).string());
    }
    highlights.clear();
    ++out.frames;
  };

  CaptureReader reader(capture);
  while (auto rec = reader.next()) {
    ++out.records;
    if (rec->topic != Topic::kAsterix) continue;
    VideoMessage m;
    try {
      m = asterix::decode(rec->payload);
    } catch (const asterix::CodecError&) {
      continue;
    }
    // A revolution ends when the legitimate sweep wraps; attack packets that
    // start at zero do not count as a wrap unless they follow the last bin.
    if (last_start && m.start_az < *last_start && *last_start >= 360.0 - 2 * pc.bearing_resolution)
      flush_frame();
    last_start = m.start_az;
    ppi.apply(m, rec->time);
    for (; next_mark < marked.size() && marked[next_mark].first <= rec->time; ++next_mark)
      highlights.push_back(marked[next_mark].second);
    if (detector) {
      const auto v = detector->process(rec->payload, "", rec->time);
      for (const detect::Anomaly& a : v.anomalies) {
        ++out.anomalies;
        highlights.push_back(a.sector);
        if (sink) sink->write(a);
      }
    }
  }
  if (last_start) flush_frame();
  return out;
}

}  // namespace rtb
