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


#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rtb/detection.hpp"

namespace rtb {
namespace detect {

namespace {

// Last `w` aggregates of the feature's history, oldest first. Empty if the
// history is shorter.
std::vector<const RevolutionAggregate*> window(const Feature& f, std::size_t w) {
  std::vector<const RevolutionAggregate*> out;
  if (!f.An || f.An->size() < w || w == 0) return out;
  for (auto it = f.An->end() - static_cast<std::ptrdiff_t>(w); it != f.An->end(); ++it)
    out.push_back(&*it);
  return out;
}

std::pair<double, double> mean_var(const std::vector<double>& xs) {
  double m = 0.0;
  for (double x : xs) m += x;
  m /= static_cast<double>(xs.size());
  double v = 0.0;
  for (double x : xs) v += (x - m) * (x - m);
  return {m, v / static_cast<double>(xs.size())};
}

struct Dominant {
  long long value = 0;
  double frequency = 0.0;
};

Dominant dominant(const std::vector<const RevolutionAggregate*>& aggs,
                  const CategoricalField& field) {
  std::map<long long, std::uint64_t> total;
  std::uint64_t n = 0;
  for (const RevolutionAggregate* a : aggs)
    for (const auto& [k, c] : field.histogram(*a)) {
      total[k] += c;
      n += c;
    }
  Dominant d;
  for (const auto& [k, c] : total) {
    const double f = static_cast<double>(c) / static_cast<double>(n);
    if (f > d.frequency) d = {k, f};
  }
  return d;
}

struct Estimate {
  double mean_of_means = 0.0;
  double var_of_means = 0.0;
  double var_of_vars = 0.0;
  double sigma = 0.0;
};

Estimate estimate(const std::vector<const RevolutionAggregate*>& aggs,
                  const StatisticalField& field) {
  std::vector<double> means, vars;
  for (const RevolutionAggregate* a : aggs) {
    const auto [m, v] = field.sample(*a);
    means.push_back(m);
    vars.push_back(v);
  }
  const auto [mm, vm] = mean_var(means);
  const auto [mv, vv] = mean_var(vars);
  return {mm, vm, vv, std::sqrt(mv + vm)};
}

}  // namespace

CandidatePolicy categorical(std::string id, std::string description, CategoricalField field,
                            const PolicyParams& p) {
  CandidatePolicy c;
  c.id = std::move(id);
  c.description = std::move(description);
  c.params = {{"window", static_cast<double>(p.window)}, {"probability", p.probability}};
  c.activation = [field, p](const FeatureSet& fg) {
    const auto aggs = window(fg.front(), p.window);
    if (aggs.empty()) return Activation::kUndecided;
    return dominant(aggs, field).frequency > p.probability ? Activation::kTrue
                                                           : Activation::kFalse;
  };
  c.transform = [id = c.id, desc = c.description, field, p](const FeatureSet& fg) {
    const auto aggs = window(fg.front(), p.window);
    if (aggs.empty()) throw std::logic_error("categorical transform without history");
    const long long bound = dominant(aggs, field).value;
    ActivePolicy a;
    a.id = id;
    a.description = desc;
    a.params = {{field.name, static_cast<double>(bound)}};
    a.predicate = [field, bound](const Feature& f) {
      return field.value(f.D) == bound ? Verdict::kPass : Verdict::kViolation;
    };
    return a;
  };
  return c;
}

CandidatePolicy statistical(std::string id, std::string description, StatisticalField field,
                            const PolicyParams& p) {
  CandidatePolicy c;
  c.id = std::move(id);
  c.description = std::move(description);
  c.params = {{"window", static_cast<double>(p.window)}, {"alpha", p.alpha}, {"beta", p.beta},
              {"sigmas", p.sigmas}};
  c.activation = [field, p](const FeatureSet& fg) {
    const Feature& f = fg.front();
    const auto aggs = window(f, p.window);
    if (aggs.empty()) return Activation::kUndecided;
    const Estimate e = estimate(aggs, field);
    const bool stable = e.var_of_means <= p.alpha && e.var_of_vars <= p.beta &&
                        (!field.admissible || field.admissible(e.mean_of_means));
    if (stable) return Activation::kTrue;
    if (f.An->size() >= p.give_up * p.window) return Activation::kFalse;
    return Activation::kUndecided;
  };
  c.transform = [id = c.id, desc = c.description, field, p](const FeatureSet& fg) {
    const auto aggs = window(fg.front(), p.window);
    if (aggs.empty()) throw std::logic_error("statistical transform without history");
    const Estimate e = estimate(aggs, field);
    const double mean = e.mean_of_means;
    const double hw = std::max(p.sigmas * e.sigma, field.quantum);
    ActivePolicy a;
    a.id = id;
    a.description = desc;
    a.params = {{field.name + "_mean", mean}, {field.name + "_half_width", hw}};
    a.predicate = [field, mean, hw](const Feature& f) { return field.test(f, mean, hw); };
    return a;
  };
  return c;
}

namespace {

CandidatePolicy make_p1(const PolicyParams& p) {
  return categorical(
      "P1", "range offset of the first cell differs from the learned value",
      {"center_bias",
       [](const RevolutionAggregate& a) {
         return std::map<long long, std::uint32_t>(a.center_bias.begin(), a.center_bias.end());
       },
       [](const PacketData& d) { return static_cast<long long>(d.center_bias); }},
      p);
}

CandidatePolicy make_p2(const PolicyParams& p) {
  return categorical("P2", "covered range differs from the learned value",
                     {"covered_m", [](const RevolutionAggregate& a) { return a.covered_m; },
                      [](const PacketData& d) { return d.covered_m; }},
                     p);
}

CandidatePolicy make_p3(const PolicyParams& p) {
  StatisticalField f;
  f.name = "span";
  f.sample = [](const RevolutionAggregate& a) { return std::make_pair(a.mu_az, a.s_az); };
  f.test = [](const Feature& x, double mean, double hw) {
    return std::abs(x.D.span - mean) <= hw ? Verdict::kPass : Verdict::kViolation;
  };
  f.quantum = p.azimuth_quantum;
  return statistical("P3", "azimuth span outside the learned band", f, p);
}

CandidatePolicy make_p4(const PolicyParams& p) {
  StatisticalField f;
  f.name = "regressions";
  f.sample = [](const RevolutionAggregate& a) {
    return std::make_pair(static_cast<double>(a.regressions), 0.0);
  };
  f.test = [](const Feature& x, double, double) {
    if (!x.D.prev_message_id) return Verdict::kUndecided;
    const std::uint32_t fwd =
        (x.D.message_id - *x.D.prev_message_id) & (asterix::kMessageIdModulus - 1);
    return fwd < asterix::kMessageIdModulus / 2 ? Verdict::kPass : Verdict::kViolation;
  };
  f.quantum = p.count_quantum;
  f.admissible = [q = p.count_quantum](double mean) { return mean < q; };
  return statistical("P4", "message identifier stepped backwards", f, p);
}

CandidatePolicy make_p5(const PolicyParams& p) {
  StatisticalField f;
  f.name = "entries";
  f.sample = [](const RevolutionAggregate& a) {
    return std::make_pair(static_cast<double>(a.entries), 0.0);
  };
  f.test = [](const Feature& x, double mean, double hw) {
    const double expected = mean * std::min(x.D.rev_position, 360.0) / 360.0;
    return x.D.rev_entries - expected <= hw ? Verdict::kPass : Verdict::kViolation;
  };
  f.quantum = p.count_quantum;
  return statistical("P5", "more packets in this revolution than learned", f, p);
}

CandidatePolicy make_p6(const PolicyParams& p) {
  StatisticalField f;
  f.name = "revolutions";
  f.sample = [](const RevolutionAggregate& a) {
    return std::make_pair(static_cast<double>(a.closes_in_period), 0.0);
  };
  f.test = [](const Feature& x, double mean, double hw) {
    // judged on the packet that would close a revolution
    if (x.D.closes_in_period == 0) return Verdict::kUndecided;
    return std::abs(x.D.closes_in_period - mean) <= hw ? Verdict::kPass : Verdict::kViolation;
  };
  f.quantum = p.count_quantum;
  return statistical("P6", "revolutions per period outside the learned band", f, p);
}

}  // namespace

std::vector<CandidatePolicy> builtin_candidates(const PolicyParams& p) {
  return {make_p1(p), make_p2(p), make_p3(p), make_p4(p), make_p5(p), make_p6(p)};
}

PolicyRegistry::PolicyRegistry() {
  add("P1", make_p1);
  add("P2", make_p2);
  add("P3", make_p3);
  add("P4", make_p4);
  add("P5", make_p5);
  add("P6", make_p6);
}

PolicyRegistry& PolicyRegistry::instance() {
  static PolicyRegistry r;
  return r;
}

void PolicyRegistry::add(const std::string& id, Factory f) { factories_[id] = std::move(f); }

std::vector<std::string> PolicyRegistry::ids() const {
  std::vector<std::string> out;
  for (const auto& [id, f] : factories_) out.push_back(id);
  return out;
}

CandidatePolicy PolicyRegistry::make(const std::string& id, const PolicyParams& p) const {
  auto it = factories_.find(id);
  if (it == factories_.end()) throw std::invalid_argument("unknown policy " + id);
  return it->second(p);
}

}  // namespace detect
}  // namespace rtb
