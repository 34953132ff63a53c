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


#include "rtb/detection.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace rtb {
namespace detect {

namespace {

// Aggregates closed in (at - period, at], counting one closing at `at`.
std::uint32_t closes_until(const History& h, Micros at, Micros period) {
  std::uint32_t n = 1;
  for (auto it = h.rbegin(); it != h.rend() && it->closed_at > at - period; ++it) ++n;
  return n;
}

constexpr std::uint32_t kHalfIdRange = asterix::kMessageIdModulus / 2;

bool backwards(std::uint32_t prev, std::uint32_t id) {
  const std::uint32_t fwd = (id - prev) & (asterix::kMessageIdModulus - 1);
  return fwd >= kHalfIdRange;
}

}  // namespace

std::string to_json_line(const Anomaly& a) {
  nlohmann::json j;
  j["policy_id"] = a.policy_id;
  j["description"] = a.description;
  j["antenna"] = {{"sac", a.antenna.sac}, {"sic", a.antenna.sic},
                  {"source", a.antenna.source_address}};
  j["sector"] = {{"a_min", a.sector.a_min}, {"a_max", a.sector.a_max},
                 {"d_min", a.sector.d_min}, {"d_max", a.sector.d_max}};
  j["timestamp_us"] = a.timestamp;
  const PacketData& d = a.packet;
  j["fields"] = {{"start_az", d.start_az},       {"end_az", d.end_az},
                 {"span", d.span},               {"center_bias", d.center_bias},
                 {"cell_dur", d.cell_dur},       {"cell_res", d.cell_res},
                 {"n_cells", d.n_cells},         {"message_id", d.message_id},
                 {"time_of_day", d.time_of_day}, {"rev_entries", d.rev_entries}};
  return j.dump();
}

// ---- collector -------------------------------------------------------------

Collector::Collector(CollectorConfig config) : config_(std::move(config)) {}

bool Collector::known(const AntennaId& s) const {
  return std::any_of(config_.antennas.begin(), config_.antennas.end(), [&](const AntennaId& a) {
    return a.sac == s.sac && a.sic == s.sic &&
           (a.source_address.empty() || a.source_address == s.source_address);
  });
}

bool Collector::wraps(const Running& r, double start_az) {
  return r.entries > 0 && start_az < r.prev_start;
}

Feature Collector::analyze(const AntennaId& s, const VideoMessage& m, Micros arrival) const {
  static const State kEmpty;
  auto it = state_.find(s);
  const State& st = it == state_.end() ? kEmpty : it->second;
  const Running& r = st.running;

  Feature f;
  f.S = s;
  PacketData& d = f.D;
  d.start_az = m.start_az;
  d.end_az = m.end_az;
  d.span = azimuth_span(m);
  d.center_bias = m.center_bias;
  d.cell_dur = m.cell_dur;
  d.cell_res = m.cell_res;
  d.n_cells = m.n_cells;
  d.covered_m = std::llround(cell_length(m.cell_dur) * m.n_cells);
  d.message_id = m.message_id;
  d.time_of_day = m.time_of_day;
  d.arrival = arrival;
  d.opens_revolution = r.entries == 0 || wraps(r, m.start_az);
  if (d.opens_revolution) {
    d.rev_entries = 1;
    d.rev_position = d.span;
  } else {
    d.rev_entries = r.entries + 1;
    d.rev_position = c360(m.start_az - r.first_start) + d.span;
  }
  d.prev_message_id = r.last_id;
  if (d.opens_revolution && r.entries > 0 && !r.partial)
    d.closes_in_period = closes_until(*st.history, arrival, to_micros(config_.period));
  if (!st.history->empty()) f.A = st.history->back();
  f.An = st.history;
  return f;
}

RevolutionAggregate Collector::close(const Running& r, const History& h, Micros at) const {
  RevolutionAggregate a = r.agg;
  a.entries = r.entries;
  a.mu_az = r.sum / r.entries;
  a.s_az = std::max(0.0, r.sum2 / r.entries - a.mu_az * a.mu_az);
  a.duration = to_seconds(r.last - r.first);
  a.opened_at = r.first;
  a.closed_at = at;
  const Micros period = to_micros(config_.period);
  a.closes_in_period = closes_until(h, at, period);
  return a;
}

bool Collector::commit(const Feature& f) {
  State& st = state_[f.S];
  Running& r = st.running;
  const PacketData& d = f.D;
  bool closed = false;
  if (d.opens_revolution && r.entries > 0) {
    if (!r.partial) {
      auto h = std::make_shared<History>(*st.history);
      h->push_back(close(r, *h, d.arrival));
      while (h->size() > config_.historian_depth) h->pop_front();
      st.history = std::move(h);
      closed = true;
    }
    const std::optional<std::uint32_t> last = r.last_id;
    r = Running{};
    r.partial = false;
    r.last_id = last;
  }
  if (r.entries == 0) {
    r.first_start = d.start_az;
    r.first = d.arrival;
  }
  r.sum += d.span;
  r.sum2 += d.span * d.span;
  ++r.entries;
  r.position = d.rev_position;
  r.prev_start = d.start_az;
  r.last = d.arrival;
  ++r.agg.center_bias[d.center_bias];
  ++r.agg.n_cells[d.n_cells];
  ++r.agg.covered_m[d.covered_m];
  if (r.last_id && backwards(*r.last_id, d.message_id)) ++r.agg.regressions;
  r.last_id = d.message_id;

  Feature latest = f;
  if (!st.history->empty()) latest.A = st.history->back();
  latest.An = st.history;
  st.latest = std::move(latest);
  return closed;
}

FeatureSet Collector::feature_set(const Feature& f) const {
  FeatureSet out{f};
  for (const auto& [id, st] : state_)
    if (!(id == f.S) && st.latest) out.push_back(*st.latest);
  return out;
}

std::shared_ptr<const History> Collector::history(const AntennaId& s) const {
  auto it = state_.find(s);
  if (it == state_.end()) return std::make_shared<History>();
  return it->second.history;
}

// ---- evaluation ------------------------------------------------------------

namespace {

AnnulusSector sector_of(const PacketData& d) {
  const double len = cell_length(d.cell_dur);
  AnnulusSector s;
  if (d.span >= 360.0) {
    s.a_min = 0.0;
    s.a_max = 360.0;
  } else {
    s.a_min = d.start_az;
    s.a_max = c360(d.start_az + d.span);
  }
  s.d_min = len * d.center_bias;
  s.d_max = len * (static_cast<double>(d.center_bias) + d.n_cells);
  return s;
}

}  // namespace

std::vector<Anomaly> evaluate(const std::vector<ActivePolicy>& active, const Feature& f) {
  std::vector<Anomaly> out;
  for (const ActivePolicy& p : active) {
    if (p.predicate(f) != Verdict::kViolation) continue;
    out.push_back(Anomaly{p.id, p.description, f.S, f.D, sector_of(f.D), f.D.arrival});
  }
  return out;
}

GenerateResult generate(std::vector<CandidatePolicy>& candidates, const FeatureSet& fg) {
  GenerateResult res;
  for (auto it = candidates.begin(); it != candidates.end();) {
    const Activation a = it->activation(fg);
    if (a == Activation::kUndecided) {
      ++it;
      continue;
    }
    if (a == Activation::kTrue) {
      try {
        res.activated.push_back(it->transform(fg));
      } catch (const std::exception& e) {
        res.warnings.push_back(it->id + ": " + e.what());
      }
    } else {
      res.rejected.push_back(it->id);
    }
    it = candidates.erase(it);
  }
  return res;
}

AnomalySink::AnomalySink(const std::string& path) : out_(path, std::ios::app) {
  if (!out_) error_ = "cannot open " + path;
}

bool AnomalySink::write(const Anomaly& a) {
  if (!out_.is_open()) {
    error_ = "sink closed";
    ++failures_;
    return false;
  }
  out_ << to_json_line(a) << '\n';
  if (!out_) {
    error_ = "write failed";
    ++failures_;
    out_.clear();
    return false;
  }
  return true;
}

Detector::Detector(DetectorConfig config)
    : config_(std::move(config)), collector_(config_.collector) {
  for (const std::string& id : config_.policies)
    candidates_.push_back(PolicyRegistry::instance().make(id, config_.params));
}

PacketVerdict Detector::process(const std::vector<std::uint8_t>& bytes, const std::string& source,
                                Micros arrival) {
  PacketVerdict v;
  VideoMessage m;
  try {
    m = asterix::decode(bytes);
  } catch (const asterix::CodecError& e) {
    v.decoded = false;
    Anomaly a;
    a.policy_id = "decode";
    a.description = e.what();
    a.antenna.source_address = source;
    a.timestamp = arrival;
    v.anomalies.push_back(std::move(a));
    return v;
  }
  const AntennaId s{m.sac, m.sic, source};
  if (!collector_.known(s)) {
    Feature f = collector_.analyze(s, m, arrival);
    v.anomalies.push_back(Anomaly{"source", "packet from an antenna that is not configured", s,
                                  f.D, sector_of(f.D), arrival});
    return v;
  }
  const Feature f = collector_.analyze(s, m, arrival);
  v.anomalies = evaluate(active_, f);
  if (!v.anomalies.empty()) return v;
  if (collector_.commit(f)) {
    Feature now = f;
    now.An = collector_.history(s);
    now.A = now.An->back();
    GenerateResult g = generate(candidates_, collector_.feature_set(now));
    for (ActivePolicy& p : g.activated) {
      activated_at_[p.id] = arrival;
      active_.push_back(std::move(p));
    }
  }
  return v;
}

}  // namespace detect
}  // namespace rtb
