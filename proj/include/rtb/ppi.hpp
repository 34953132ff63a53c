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

#ifndef RTB_PPI_HPP_
#define RTB_PPI_HPP_

#include <cstdint>
#include <deque>
#include <vector>

#include "rtb/asterix.hpp"
#include "rtb/sector.hpp"

namespace rtb {

struct PpiConfig {
  double rotation_period = 2.5;     // seconds per revolution
  double bearing_resolution = 1.0;  // degrees per bin
  bool quirk = true;                // replace on geometry change
  std::size_t trail_length = 8;     // frames kept for trails
  std::size_t trail_cells = 256;    // radial samples per trail frame
  double range_scale = 12.0 * kMetersPerNm;
};

enum class Orientation { kHeadUp, kNorthUp };

struct BinGeometry {
  std::uint64_t cell_dur_fs = 0;
  std::uint32_t center_bias = 0;
  std::uint32_t n_cells = 0;

  bool operator==(const BinGeometry&) const = default;
  double cell_length() const { return rtb::cell_length(static_cast<double>(cell_dur_fs) * 1e-15); }
  double start_range() const { return cell_length() * center_bias; }
  double end_range() const { return cell_length() * (double(center_bias) + n_cells); }
};

struct PpiBin {
  bool valid = false;
  BinGeometry geometry;
  std::uint8_t cell_res = 8;
  std::vector<std::uint32_t> cells;
  Micros last_update = 0;
};

// Downsampled polar snapshot used for echo trails.
struct TrailFrame {
  double heading = 0.0;
  std::vector<std::uint8_t> intensity;  // bins x trail_cells
};

class PpiImage {
 public:
  explicit PpiImage(PpiConfig config = {});

  const PpiConfig& config() const { return config_; }
  std::size_t n_bins() const { return bins_.size(); }
  const PpiBin& bin(std::size_t i) const { return bins_[i]; }
  Micros persistence() const { return persistence_; }

  double heading() const { return heading_; }
  void set_heading(double h) { heading_ = h; }
  Orientation orientation() const { return orientation_; }
  void set_orientation(Orientation o) { orientation_ = o; }

  // Bins whose centre lies in [start, start+span), or the bin holding
  // start when none does.
  std::vector<std::size_t> bins_for(double start_az, double span) const;

  void apply(const VideoMessage& msg, Micros now);

  // Displayed strength at `range` meters in bin `i`, scaled to 0..1.
  double intensity_at(std::size_t i, double range) const;
  std::uint32_t strength_at(std::size_t i, double range) const;

  // Displayed strengths resampled onto a geometry, e.g. for comparison.
  std::vector<std::uint32_t> sample(std::size_t i, const BinGeometry& g) const;

  void push_trail();
  const std::deque<TrailFrame>& trails() const { return trails_; }

  // FNV-1a over every bin's geometry and cells.
  std::uint64_t hash() const;

 private:
  void merge(PpiBin& bin, const VideoMessage& msg, const BinGeometry& g);

  PpiConfig config_;
  Micros persistence_;
  std::vector<PpiBin> bins_;
  double heading_ = 0.0;
  Orientation orientation_ = Orientation::kHeadUp;
  std::deque<TrailFrame> trails_;
};

inline void ppi_apply(PpiImage& img, const VideoMessage& msg, Micros now) {
  img.apply(msg, now);
}

BinGeometry geometry_of(const VideoMessage& msg);

}  // namespace rtb

#endif  // RTB_PPI_HPP_
