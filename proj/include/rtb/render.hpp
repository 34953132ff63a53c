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

#ifndef RTB_RENDER_HPP_
#define RTB_RENDER_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "rtb/ppi.hpp"
#include "rtb/sector.hpp"

namespace rtb {

struct Frame {
  int size = 0;
  std::vector<std::uint8_t> rgb;  // size * size * 3

  std::uint8_t* pixel(int x, int y) { return rgb.data() + 3 * (y * size + x); }
  const std::uint8_t* pixel(int x, int y) const { return rgb.data() + 3 * (y * size + x); }
};

struct RenderOptions {
  int size = 512;
  Orientation mode = Orientation::kHeadUp;
  bool trails = false;
  int rings = 4;
  // Antenna-relative sectors to highlight, e.g. from anomaly records.
  std::vector<AnnulusSector> highlights;
};

Frame render(const PpiImage& img, const RenderOptions& opts);

std::vector<std::uint8_t> to_ppm(const Frame& f);
void write_ppm(const Frame& f, const std::string& path);
Frame read_ppm(const std::string& path);

}  // namespace rtb

#endif  // RTB_RENDER_HPP_
