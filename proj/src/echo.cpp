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

#include "rtb/echo.hpp"

#include <algorithm>
#include <cmath>

#include "rtb/sector.hpp"

namespace rtb {
namespace {

// Integral of the unit hat function from -inf to u.
double hat_cdf(double u) {
  if (u <= -1.0) return 0.0;
  if (u <= 0.0) return 0.5 * (u + 1.0) * (u + 1.0);
  if (u <= 1.0) return 1.0 - 0.5 * (1.0 - u) * (1.0 - u);
  return 1.0;
}

double hat(double u) { return std::max(0.0, 1.0 - std::fabs(u)); }

// Hat of half-width `w` centred at `c`, integrated over [lo, hi] and
// normalized so a hat centred on the interval gives 1.
double hat_weight(double lo, double hi, double c, double w) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  if (half < 1e-9 * w) return hat((mid - c) / w);
  const double num = hat_cdf((hi - c) / w) - hat_cdf((lo - c) / w);
  const double den = hat_cdf(half / w) - hat_cdf(-half / w);
  return num / den;
}

}  // namespace

double footprint_half_angle(const Footprint& f) {
  if (f.range <= f.radius) return 180.0;
  return rad2deg(std::asin(f.radius / f.range));
}

std::size_t paint_binary(VideoMessage& msg, const Footprint& f) {
  const double phi = footprint_half_angle(f);
  if (phi < 180.0) {
    const AnnulusSector beam{c360(f.bearing - phi), c360(f.bearing + phi), 0.0, kUnbounded};
    if (!beam.overlaps_angles(msg.start_az, azimuth_span(msg))) return 0;
  }
  const double len = cell_length(msg.cell_dur);
  const double b = msg.center_bias;
  const double lo = std::floor((f.range - f.radius) / len - b);
  const double hi = std::ceil((f.range + f.radius) / len - b);
  const auto first = static_cast<long long>(std::max(0.0, lo));
  const auto last = static_cast<long long>(std::min<double>(msg.n_cells, hi));
  const std::uint32_t top = max_strength(msg.cell_res);
  std::size_t n = 0;
  for (long long j = first; j < last; ++j, ++n) msg.cells[j] = top;
  return n;
}

std::size_t paint_weighted(VideoMessage& msg, const Footprint& f, double bin_width) {
  const double phi = std::min(footprint_half_angle(f), 179.0);
  const double centre = msg.start_az + 0.5 * azimuth_span(msg);
  const double d = angle_diff(centre, f.bearing);
  const double w_az = hat_weight(-phi, phi, d, bin_width);
  if (w_az <= 0.0) return 0;

  const double len = cell_length(msg.cell_dur);
  const double b = msg.center_bias;
  const double lo = f.range - f.radius;
  const double hi = f.range + f.radius;
  const auto first = static_cast<long long>(std::max(0.0, std::floor((lo - len) / len - b)));
  const auto last = static_cast<long long>(
      std::min<double>(msg.n_cells, std::ceil((hi + len) / len - b) + 1));
  const double top = max_strength(msg.cell_res);
  std::size_t n = 0;
  for (long long j = first; j < last; ++j) {
    const double c = (static_cast<double>(j) + b + 0.5) * len;
    const double w = w_az * hat_weight(lo, hi, c, len);
    const auto v = static_cast<std::uint32_t>(std::llround(top * std::clamp(w, 0.0, 1.0)));
    if (v == 0) continue;
    msg.cells[j] = std::max(msg.cells[j], v);
    ++n;
  }
  return n;
}

}  // namespace rtb
