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


// rtb: run radar testbed experiments from the command line.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "rtb/experiment.hpp"

namespace fs = std::filesystem;
using rtb::ExperimentConfig;

namespace {

struct RunFlags {
  std::string scenario;
  std::string attack = "none";
  bool detect = false;
  std::string bus = "inproc";
  std::uint64_t seed = 1;
  double duration = 0.0;
  int frames_every = 0;
  std::string out;
  bool check = false;
  bool capture = false;
  bool no_quirk = false;
};

rtb::ScenarioKind kind_for(rtb::AttackKind a) {
  switch (a) {
    case rtb::AttackKind::kDos: return rtb::ScenarioKind::kDos;
    case rtb::AttackKind::kGhost: return rtb::ScenarioKind::kGhost;
    case rtb::AttackKind::kHijack: return rtb::ScenarioKind::kHijack;
    case rtb::AttackKind::kNone: break;
  }
  return rtb::ScenarioKind::kClean;
}

ExperimentConfig build_config(const RunFlags& f, CLI::App& app) {
  ExperimentConfig c;
  if (!f.scenario.empty()) {
    c = rtb::load_config(f.scenario);
    if (app.count("--attack")) c.attack.kind = rtb::attack_kind_from(f.attack);
  } else {
    c = rtb::default_config(kind_for(rtb::attack_kind_from(f.attack)), f.seed);
  }
  if (app.count("--detect")) c.detect = f.detect;
  else if (f.scenario.empty()) c.detect = false;
  c.bus = rtb::bus_mode_from(f.bus);
  if (f.duration > 0) c.scenario.duration = f.duration;
  c.frames_every = f.frames_every;
  c.out_dir = f.out;
  c.capture = f.capture;
  if (f.no_quirk) c.ppi.quirk = false;
  return c;
}

// Per-run checks behind --check.
bool run_passes(const rtb::RunResult& r, std::ostream& os) {
  bool ok = true;
  if (r.attack != rtb::AttackKind::kNone && !r.success) {
    os << "check failed: attack unsuccessful (" << r.outcome << ")\n";
    ok = false;
  }
  if (r.detect) {
    if (r.tp + r.fn > 0 && r.tp_rate() < 0.99) {
      os << "check failed: TP rate " << r.tp_rate() << " < 0.99\n";
      ok = false;
    }
    if (r.fp_rate() > 0.005) {
      os << "check failed: FP rate " << r.fp_rate() << " > 0.005\n";
      ok = false;
    }
  }
  return ok;
}

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--scenario", f.scenario, "YAML scenario file")->check(CLI::ExistingFile);
  cmd->add_option("--attack", f.attack, "none|dos|ghost|hijack")
      ->check(CLI::IsMember({"none", "dos", "ghost", "hijack"}));
  cmd->add_flag("--detect,!--no-detect", f.detect, "attach the detector");
  cmd->add_option("--bus", f.bus, "inproc|udp")->check(CLI::IsMember({"inproc", "udp"}));
  cmd->add_option("--seed", f.seed, "scenario seed");
  cmd->add_option("--duration", f.duration, "seconds after the warmup");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_flag("--check", f.check, "exit nonzero when a check fails");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radar testbed: simulator, attacks and detection over CAT-240/NMEA"};
  app.require_subcommand(1);

  RunFlags run;
  auto* run_cmd = app.add_subcommand("run", "one experiment");
  add_run_flags(run_cmd, run);
  run_cmd->add_option("--frames-every", run.frames_every, "write a PPM every N revolutions");
  run_cmd->add_flag("--capture", run.capture, "record the victim-side traffic");
  run_cmd->add_flag("--no-quirk", run.no_quirk, "PPI sums instead of replacing");

  RunFlags batch;
  int runs = 25;
  unsigned threads = 0;
  auto* batch_cmd = app.add_subcommand("batch", "seeded runs of one attack");
  add_run_flags(batch_cmd, batch);
  batch_cmd->add_option("--runs", runs, "number of seeds")->check(CLI::PositiveNumber);
  batch_cmd->add_option("--threads", threads, "worker threads, 0 = all cores");

  std::string capture, frames_out, mode = "head-up", anomalies_in;
  bool trails = false;
  auto* render_cmd = app.add_subcommand("render-frames", "PPM frames from a capture");
  render_cmd->add_option("capture", capture)->required()->check(CLI::ExistingFile);
  render_cmd->add_option("--out", frames_out)->required();
  render_cmd->add_option("--mode", mode)->check(CLI::IsMember({"head-up", "north-up"}));
  render_cmd->add_flag("--trails", trails);
  render_cmd->add_option("--anomalies", anomalies_in, "anomaly log to highlight")
      ->check(CLI::ExistingFile);

  std::string replay_capture, replay_log, replay_scenario;
  bool replay_detect = false;
  auto* replay_cmd = app.add_subcommand("replay", "feed a capture through PPI and detector");
  replay_cmd->add_option("capture", replay_capture)->required()->check(CLI::ExistingFile);
  replay_cmd->add_option("--scenario", replay_scenario)->check(CLI::ExistingFile);
  replay_cmd->add_flag("--detect", replay_detect);
  replay_cmd->add_option("--anomalies", replay_log, "write anomalies here");

  std::string scen_kind = "clean";
  std::uint64_t scen_seed = 1;
  auto* scen_cmd = app.add_subcommand("scenario", "print a randomized scenario file");
  scen_cmd->add_option("--kind", scen_kind)
      ->check(CLI::IsMember({"clean", "dos", "ghost", "hijack"}));
  scen_cmd->add_option("--seed", scen_seed);

  auto* pol_cmd = app.add_subcommand("policies", "detection policies");
  pol_cmd->require_subcommand(1);
  auto* pol_list = pol_cmd->add_subcommand("list", "known policy ids");
  std::string pol_id;
  auto* pol_desc = pol_cmd->add_subcommand("describe", "one policy");
  pol_desc->add_option("id", pol_id)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      const ExperimentConfig c = build_config(run, *run_cmd);
      const rtb::RunResult r = rtb::run_experiment(c);
      if (!run.out.empty()) {
        rtb::write_artifacts(r, run.out);
        std::ofstream(fs::path(run.out) / "scenario.yaml") << rtb::dump_config(c);
      }
      std::cout << rtb::to_json(r).dump(2) << '\n';
      if (run.check && !run_passes(r, std::cerr)) return 1;
      return 0;
    }
    if (*batch_cmd) {
      const auto kind = kind_for(rtb::attack_kind_from(batch.attack));
      const bool detect = batch.detect;
      const RunFlags f = batch;
      const rtb::BatchResult b = rtb::run_batch(
          kind, runs, batch.seed, detect, threads, [&f](ExperimentConfig& c) {
            c.bus = rtb::bus_mode_from(f.bus);
            if (f.duration > 0) c.scenario.duration = f.duration;
          });
      const auto j = rtb::to_json(b);
      if (!batch.out.empty()) {
        fs::create_directories(batch.out);
        std::ofstream(fs::path(batch.out) / "batch.json") << j.dump(2) << '\n';
      }
      std::cout << j.dump(2) << '\n';
      if (batch.check) {
        bool ok = true;
        for (const auto& r : b.runs) ok = run_passes(r, std::cerr) && ok;
        return ok ? 0 : 1;
      }
      return 0;
    }
    if (*render_cmd) {
      ExperimentConfig c;
      c.render.mode = mode == "north-up" ? rtb::Orientation::kNorthUp : rtb::Orientation::kHeadUp;
      c.render.trails = trails;
      rtb::ReplayOptions o;
      o.frames_dir = frames_out;
      o.anomaly_in = anomalies_in;
      const auto r = rtb::replay_capture(capture, c, o);
      std::cout << "frames " << r.frames << " records " << r.records << '\n';
      return 0;
    }
    if (*replay_cmd) {
      ExperimentConfig c;
      if (!replay_scenario.empty()) c = rtb::load_config(replay_scenario);
      rtb::ReplayOptions o;
      o.detect = replay_detect;
      o.anomaly_out = replay_log;
      const auto r = rtb::replay_capture(replay_capture, c, o);
      nlohmann::json j = {{"records", r.records}, {"revolutions", r.frames},
                          {"anomalies", r.anomalies}};
      std::cout << j.dump(2) << '\n';
      return 0;
    }
    if (*scen_cmd) {
      std::cout << rtb::dump_config(
          rtb::default_config(rtb::scenario_kind_from(scen_kind), scen_seed));
      return 0;
    }
    if (*pol_list) {
      for (const std::string& id : rtb::detect::PolicyRegistry::instance().ids()) {
        const auto p = rtb::detect::PolicyRegistry::instance().make(id, {});
        std::cout << id << "  " << p.description << '\n';
      }
      return 0;
    }
    if (*pol_desc) {
      const auto p = rtb::detect::PolicyRegistry::instance().make(pol_id, {});
      nlohmann::json j = {{"id", p.id}, {"description", p.description}, {"params", p.params}};
      std::cout << j.dump(2) << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "rtb: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
