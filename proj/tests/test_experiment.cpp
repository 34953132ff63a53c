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

#include <filesystem>
#include <fstream>

#include "rtb/capture.hpp"
#include "rtb/experiment.hpp"
#include "rtb/scenario.hpp"

namespace rtb {
namespace {

namespace fs = std::filesystem;

ExperimentConfig short_run(ScenarioKind kind, std::uint64_t seed, double duration) {
  ExperimentConfig c = default_config(kind, seed);
  c.scenario.duration = duration;
  return c;
}

fs::path scratch(const std::string& name) {
  fs::path p = fs::path(testing::TempDir()) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

TEST(Config, DumpParseDumpIsStable) {
  for (auto kind : {ScenarioKind::kClean, ScenarioKind::kDos, ScenarioKind::kGhost,
                    ScenarioKind::kHijack}) {
    const std::string a = dump_config(default_config(kind, 7));
    const ExperimentConfig c = parse_config(a);
    EXPECT_EQ(dump_config(c), a) << to_string(kind);
    EXPECT_EQ(c.scenario.kind, kind);
    EXPECT_EQ(c.scenario.seed, 7u);
  }
}

TEST(Config, SeedOnlyFileIsRandomized) {
  const ExperimentConfig c = parse_config("seed: 3\nkind: ghost\n");
  const Scenario r = randomize(ScenarioKind::kGhost, 3);
  EXPECT_EQ(c.scenario.ships.size(), r.ships.size());
  EXPECT_EQ(c.scenario.victim.state.position.lat, r.victim.state.position.lat);
  EXPECT_EQ(c.attack.kind, AttackKind::kGhost);
}

TEST(Config, OverridesApply) {
  const ExperimentConfig c = parse_config(
      "seed: 4\nkind: dos\nduration: 12\nattack:\n  k: 5\nppi:\n  quirk: false\n"
      "detection:\n  enabled: false\n  window: 30\n");
  EXPECT_EQ(c.scenario.duration, 12.0);
  EXPECT_EQ(c.attack.k, 5);
  EXPECT_FALSE(c.ppi.quirk);
  EXPECT_FALSE(c.detect);
  EXPECT_EQ(c.detector.params.window, 30u);
}

TEST(Config, RejectsBadInput) {
  EXPECT_THROW(parse_config("kind: [unclosed"), ConfigError);
  EXPECT_THROW(parse_config("seed: 1\nkind: tsunami\n"), ConfigError);
  EXPECT_THROW(parse_config("seed: 1\nkind: dos\nattack:\n  kind: teleport\n"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/scenario.yaml"), ConfigError);
}

TEST(WindowMeans, AveragesFixedWindows) {
  std::vector<TtmSample> s;
  for (int i = 0; i < 60; ++i) {
    TtmSample x;
    x.t = 100 + i;
    x.tcpa = i < 20 ? 10 : (i < 40 ? 8 : 6);
    s.push_back(x);
  }
  s[5].tcpa = std::numeric_limits<double>::infinity();
  EXPECT_EQ(window_means(s, 20), (std::vector<double>{10, 8, 6}));
}

TEST(Success, DosCriteria) {
  RunResult r;
  r.duration = 60;
  r.active_at = 10;
  auto ttm = [](double t, int id, char st, double kn) {
    TtmSample s;
    s.t = t;
    s.target = id;
    s.status = st;
    s.speed = kn;
    return s;
  };
  r.ttms = {ttm(5, 1, 'T', 10), ttm(12, 1, 'T', 10)};
  EXPECT_FALSE(dos_succeeded(r));
  r.ttms.push_back(ttm(15, 1, 'L', 10));
  EXPECT_TRUE(dos_succeeded(r));
  r.ttms = {ttm(5, 1, 'T', 10), ttm(12, 1, 'T', 250)};  // 128 m/s
  EXPECT_TRUE(dos_succeeded(r));
  r.ttms = {ttm(11, 1, 'T', 10), ttm(13.5, 1, 'T', 60)};  // 10.3 m/s^2
  EXPECT_TRUE(dos_succeeded(r));
  r.ttms = {ttm(5, 1, 'T', 10), ttm(8, 1, 'L', 10)};  // before the attack
  EXPECT_FALSE(dos_succeeded(r));
}

TEST(Success, GhostCriteria) {
  RunResult r;
  for (int i = 0; i < 60; ++i) {
    TtmSample s;
    s.t = i;
    s.status = 'T';
    s.dangerous = i > 30;
    s.tcpa = 20 - i * 0.2;
    r.subject.push_back(s);
  }
  std::string why;
  EXPECT_TRUE(ghost_succeeded(r, &why)) << why;
  for (int i = 40; i < 60; ++i) r.subject[i].tcpa = 30;
  EXPECT_FALSE(ghost_succeeded(r, &why));
  EXPECT_EQ(why, "TCPA not strictly decreasing");
}

TEST(Success, HijackNeedsCapability) {
  RunResult r;
  TtmSample s;
  s.tcpa = -0.5;
  r.subject = {s};
  EXPECT_FALSE(hijack_succeeded(r));
  r.delete_capability = "granted";
  EXPECT_TRUE(hijack_succeeded(r));
}

TEST(Run, CleanTrafficIsQuiet) {
  const RunResult r = run_experiment(short_run(ScenarioKind::kClean, 5, 20));
  EXPECT_EQ(r.attack_asterix + r.attack_nmea, 0u);
  EXPECT_EQ(r.fp, 0u);
  EXPECT_GT(r.tn, 0u);
  for (const auto& [id, h] : r.policy) EXPECT_EQ(h.attack + h.legit, 0u) << id;
  EXPECT_GT(r.revolutions, 40u);
  EXPECT_EQ(r.activated_at.size(), 6u);
}

TEST(Run, SameSeedSameReport) {
  const auto c = short_run(ScenarioKind::kDos, 9, 15);
  const auto a = to_json(run_experiment(c), false);
  const auto b = to_json(run_experiment(c), false);
  EXPECT_EQ(a.dump(), b.dump());
}

TEST(Run, DetectorDoesNotTouchTheDisplay) {
  auto c = short_run(ScenarioKind::kDos, 11, 15);
  const RunResult with = run_experiment(c);
  c.detect = false;
  const RunResult without = run_experiment(c);
  EXPECT_EQ(with.frame_hash, without.frame_hash);
  EXPECT_EQ(with.ttms.size(), without.ttms.size());
  EXPECT_GT(with.attack_asterix, 0u);
}

TEST(Run, ArtifactsAndReplay) {
  const fs::path dir = scratch("rtb_run");
  auto c = short_run(ScenarioKind::kDos, 2, 10);
  c.out_dir = dir.string();
  c.capture = true;
  c.frames_every = 10;
  const RunResult r = run_experiment(c);
  write_artifacts(r, c.out_dir);
  EXPECT_TRUE(fs::exists(dir / "report.json"));
  EXPECT_TRUE(fs::exists(dir / "tcpa.csv"));
  EXPECT_TRUE(fs::exists(dir / "anomalies.jsonl"));
  ASSERT_TRUE(fs::exists(dir / "capture.rhcap"));
  std::size_t frames = 0;
  for (const auto& e : fs::directory_iterator(dir / "frames")) frames += e.path().extension() == ".ppm";
  EXPECT_NEAR(static_cast<double>(frames), r.revolutions / 10.0, 1.0);

  std::ifstream in(dir / "anomalies.jsonl");
  std::size_t lines = 0;
  for (std::string l; std::getline(in, l);) ++lines;
  EXPECT_EQ(lines, r.anomalies_written);

  ReplayOptions o;
  o.frames_dir = (dir / "replay").string();
  o.detect = true;
  o.anomaly_out = (dir / "replay.jsonl").string();
  o.anomaly_in = (dir / "anomalies.jsonl").string();
  const ReplayResult p = replay_capture((dir / "capture.rhcap").string(), c, o);
  EXPECT_EQ(p.records, read_capture((dir / "capture.rhcap").string()).size());
  EXPECT_NEAR(static_cast<double>(p.frames), static_cast<double>(r.revolutions), 1.0);
  std::size_t replayed = 0;
  for (const auto& e : fs::directory_iterator(dir / "replay")) replayed += e.path().extension() == ".ppm";
  EXPECT_EQ(replayed, p.frames);
  EXPECT_GT(p.anomalies, 0u);
}

TEST(Replay, EmptyCaptureHasNoFrames) {
  const fs::path dir = scratch("rtb_empty_replay");
  { CaptureWriter w((dir / "empty.rhcap").string()); }
  ReplayOptions o;
  o.frames_dir = (dir / "frames").string();
  const ReplayResult p = replay_capture((dir / "empty.rhcap").string(),
                                        default_config(ScenarioKind::kClean, 1), o);
  EXPECT_EQ(p.records, 0u);
  EXPECT_EQ(p.frames, 0u);
}

}  // namespace
}  // namespace rtb
