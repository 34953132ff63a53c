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

#include "rtb/render.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rtb {

Frame render(const PpiImage& img, const RenderOptions& opts) {
  Frame f;
  f.size = opts.size;
  f.rgb.assign(static_cast<std::size_t>(f.size) * f.size * 3, 0);
  const double half = f.size / 2.0;
  const double scale = img.config().range_scale / half;  // meters per pixel
  const double res = img.config().bearing_resolution;
  const std::size_t nb = img.n_bins();
  const auto& trails = img.trails();
  const std::size_t trail_cells = img.config().trail_cells;
  const double ring_step = opts.rings > 0 ? half / opts.rings : 0.0;

  for (int y = 0; y < f.size; ++y) {
    for (int x = 0; x < f.size; ++x) {
      const double dx = x + 0.5 - half;
      const double dy = half - (y + 0.5);
      const double rpx = std::hypot(dx, dy);
      if (rpx > half) continue;
      std::uint8_t* p = f.pixel(x, y);
      p[0] = 8;
      p[1] = 16;
      p[2] = 24;
      const double screen = c360(rad2deg(std::atan2(dx, dy)));
      // Screen angle is relative bearing in head-up, true bearing in north-up.
      auto rel_of = [&](double heading) {
        return opts.mode == Orientation::kHeadUp ? screen : c360(screen - heading);
      };
      const double range = rpx * scale;
      double g = 0.0;
      if (opts.trails && !trails.empty()) {
        const auto j = static_cast<std::size_t>(range / img.config().range_scale * trail_cells);
        double w = 0.5;
        for (auto it = trails.rbegin(); it != trails.rend(); ++it, w *= 0.7) {
          const auto bin = static_cast<std::size_t>(rel_of(it->heading) / res) % nb;
          if (j < trail_cells) g = std::max(g, w * it->intensity[bin * trail_cells + j] / 255.0);
        }
      }
      const auto bin = static_cast<std::size_t>(rel_of(img.heading()) / res) % nb;
      const double live = img.intensity_at(bin, range);
      if (live > 0.0) g = std::max(g, 0.35 + 0.65 * live);
      if (g > 0.0) {
        p[0] = static_cast<std::uint8_t>(40 * g);
        p[1] = static_cast<std::uint8_t>(std::min(255.0, 60 + 195 * g));
        p[2] = static_cast<std::uint8_t>(40 * g);
      }
      for (const auto& s : opts.highlights) {
        if (s.contains(range, rel_of(img.heading()))) {
          p[0] = static_cast<std::uint8_t>(std::min(255, p[0] + 150));
          p[2] = static_cast<std::uint8_t>(p[2] / 2);
        }
      }
      if (ring_step > 0.0) {
        const double k = rpx / ring_step;
        if (std::fabs(k - std::round(k)) * ring_step < 0.6 && std::round(k) >= 1) {
          p[0] = p[1] = p[2] = 110;
        }
      }
    }
  }
  // Own ship marker.
  for (int dy = -2; dy <= 2; ++dy)
    for (int dx = -2; dx <= 2; ++dx) {
      std::uint8_t* p = f.pixel(static_cast<int>(half) + dx, static_cast<int>(half) + dy);
      p[0] = p[1] = p[2] = 255;
    }
  return f;
}

std::vector<std::uint8_t> to_ppm(const Frame& f) {
  std::string header = "P6\n" + std::to_string(f.size) + " " + std::to_string(f.size) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), f.rgb.begin(), f.rgb.end());
  return out;
}

void write_ppm(const Frame& f, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path);
  const auto bytes = to_ppm(f);
  os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw std::runtime_error("write failed: " + path);
}

Frame read_ppm(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  std::string magic;
  int w = 0, h = 0, maxv = 0;
  is >> magic >> w >> h >> maxv;
  is.get();
  if (magic != "P6" || w != h || maxv != 255) throw std::runtime_error("unsupported PPM: " + path);
  Frame f;
  f.size = w;
  f.rgb.resize(static_cast<std::size_t>(w) * h * 3);
  is.read(reinterpret_cast<char*>(f.rgb.data()), static_cast<std::streamsize>(f.rgb.size()));
  if (!is) throw std::runtime_error("short PPM: " + path);
  return f;
}

}  // namespace rtb
