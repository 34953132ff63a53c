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

#include "rtb/ppi.hpp"

#include <algorithm>
#include <cmath>

namespace rtb {
namespace {

std::uint32_t rescale(std::uint32_t v, std::uint8_t from, std::uint8_t to) {
  if (from == to) return v;
  const double f = static_cast<double>(v) / max_strength(from);
  return static_cast<std::uint32_t>(std::llround(f * max_strength(to)));
}

std::uint32_t sat_add(std::uint32_t a, std::uint32_t b, std::uint32_t top) {
  const std::uint64_t s = std::uint64_t{a} + b;
  return s > top ? top : static_cast<std::uint32_t>(s);
}

// Cell of `g` holding range r, or -1.
long long cell_at(const BinGeometry& g, double r) {
  const double len = g.cell_length();
  if (len <= 0.0) return -1;
  const double idx = std::floor(r / len) - g.center_bias;
  if (idx < 0 || idx >= g.n_cells) return -1;
  return static_cast<long long>(idx);
}

}  // namespace

BinGeometry geometry_of(const VideoMessage& msg) {
  return {asterix::femtoseconds(msg.cell_dur), msg.center_bias, msg.n_cells};
}

PpiImage::PpiImage(PpiConfig config)
    : config_(config),
      persistence_(to_micros(config.rotation_period / 2.0)),
      bins_(static_cast<std::size_t>(std::llround(360.0 / config.bearing_resolution))) {}

std::vector<std::size_t> PpiImage::bins_for(double start_az, double span) const {
  std::vector<std::size_t> out;
  const double res = config_.bearing_resolution;
  const std::size_t n = bins_.size();
  if (span >= 360.0) {
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = i;
    return out;
  }
  // First bin whose centre is at or after start.
  const double s = c360(start_az);
  auto k = static_cast<long long>(std::ceil(s / res - 0.5));
  for (;; ++k) {
    const double centre = (static_cast<double>(k) + 0.5) * res;
    if (centre - s >= span) break;
    out.push_back(static_cast<std::size_t>(k) % n);
    if (out.size() >= n) break;
  }
  if (out.empty()) out.push_back(static_cast<std::size_t>(s / res) % n);
  return out;
}

void PpiImage::apply(const VideoMessage& msg, Micros now) {
  const BinGeometry g = geometry_of(msg);
  for (std::size_t i : bins_for(msg.start_az, azimuth_span(msg))) {
    PpiBin& b = bins_[i];
    const bool fresh = b.valid && now - b.last_update < persistence_;
    if (fresh && b.geometry == g) {
      const std::uint32_t top = max_strength(b.cell_res);
      for (std::size_t j = 0; j < g.n_cells; ++j)
        b.cells[j] = sat_add(b.cells[j], rescale(msg.cells[j], msg.cell_res, b.cell_res), top);
    } else if (fresh && !config_.quirk) {
      merge(b, msg, g);
    } else {
      b.valid = true;
      b.geometry = g;
      b.cell_res = msg.cell_res;
      b.cells.assign(msg.cells.begin(), msg.cells.end());
    }
    b.last_update = now;
  }
}

// Range-space sum onto the finer of the two geometries over the union of
// their extents.
void PpiImage::merge(PpiBin& b, const VideoMessage& msg, const BinGeometry& g) {
  const BinGeometry& old = b.geometry;
  const std::uint64_t fs = std::min(old.cell_dur_fs, g.cell_dur_fs);
  const double len = cell_length(static_cast<double>(fs) * 1e-15);
  const double lo = std::min(old.start_range(), g.start_range());
  const double hi = std::max(old.end_range(), g.end_range());
  BinGeometry out{fs, static_cast<std::uint32_t>(std::floor(lo / len + 1e-9)), 0};
  out.n_cells = static_cast<std::uint32_t>(std::ceil(hi / len - 1e-9)) - out.center_bias;

  const std::uint32_t top = max_strength(b.cell_res);
  std::vector<std::uint32_t> cells(out.n_cells, 0);
  for (std::uint32_t j = 0; j < out.n_cells; ++j) {
    const double r = (double(out.center_bias) + j + 0.5) * len;
    std::uint32_t v = 0;
    if (auto k = cell_at(old, r); k >= 0) v = b.cells[k];
    if (auto k = cell_at(g, r); k >= 0)
      v = sat_add(v, rescale(msg.cells[k], msg.cell_res, b.cell_res), top);
    cells[j] = v;
  }
  b.geometry = out;
  b.cells = std::move(cells);
}

std::uint32_t PpiImage::strength_at(std::size_t i, double range) const {
  const PpiBin& b = bins_[i];
  if (!b.valid) return 0;
  const auto k = cell_at(b.geometry, range);
  return k < 0 ? 0 : b.cells[k];
}

double PpiImage::intensity_at(std::size_t i, double range) const {
  const auto v = strength_at(i, range);
  return v == 0 ? 0.0 : static_cast<double>(v) / max_strength(bins_[i].cell_res);
}

std::vector<std::uint32_t> PpiImage::sample(std::size_t i, const BinGeometry& g) const {
  std::vector<std::uint32_t> out(g.n_cells, 0);
  const double len = g.cell_length();
  for (std::uint32_t j = 0; j < g.n_cells; ++j)
    out[j] = strength_at(i, (double(g.center_bias) + j + 0.5) * len);
  return out;
}

void PpiImage::push_trail() {
  TrailFrame f;
  f.heading = heading_;
  const std::size_t cells = config_.trail_cells;
  f.intensity.assign(bins_.size() * cells, 0);
  const double step = config_.range_scale / static_cast<double>(cells);
  for (std::size_t i = 0; i < bins_.size(); ++i)
    for (std::size_t j = 0; j < cells; ++j)
      f.intensity[i * cells + j] = static_cast<std::uint8_t>(
          std::lround(255.0 * intensity_at(i, (static_cast<double>(j) + 0.5) * step)));
  trails_.push_back(std::move(f));
  while (trails_.size() > config_.trail_length) trails_.pop_front();
}

std::uint64_t PpiImage::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t v) {
    for (int k = 0; k < 8; ++k) {
      h ^= (v >> (8 * k)) & 0xFF;
      h *= 1099511628211ull;
    }
  };
  for (const auto& b : bins_) {
    mix(b.valid);
    mix(b.geometry.cell_dur_fs);
    mix(b.geometry.center_bias);
    mix(b.geometry.n_cells);
    mix(b.cell_res);
    mix(static_cast<std::uint64_t>(b.last_update));
    for (auto c : b.cells) mix(c);
  }
  return h;
}

}  // namespace rtb
