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

#ifndef RTB_ECHO_HPP_
#define RTB_ECHO_HPP_

#include "rtb/asterix.hpp"

namespace rtb {

// A target seen from the antenna: centre range, antenna-relative bearing,
// and the radius of the circle that bounds it.
struct Footprint {
  double range = 0.0;
  double bearing = 0.0;
  double radius = 0.0;
};

// Half-angle subtended by the footprint circle; 180 when the antenna sits
// inside it.
double footprint_half_angle(const Footprint& f);

// Full-strength cells over [range - r, range + r] when the circle touches
// the message's azimuth span. Returns the number of cells written.
std::size_t paint_binary(VideoMessage& msg, const Footprint& f);

// Strengths fall off linearly over one bin in azimuth and one cell in range
// around the footprint, so that the strength-weighted centroid over bin and
// cell centres lands on the footprint centre. Values combine by max.
std::size_t paint_weighted(VideoMessage& msg, const Footprint& f, double bin_width);

}  // namespace rtb

#endif  // RTB_ECHO_HPP_
