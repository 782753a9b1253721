// Copyright 2026 The wildfire Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef WILDFIRE_TESTS_SUPPORT_SCENARIOS_HPP_
#define WILDFIRE_TESTS_SUPPORT_SCENARIOS_HPP_

#include <cmath>
#include <string>
#include <vector>

#include "wildfire/adversary.hpp"

namespace wildfire::testing {

// Point elements around a fixed ignition point in a single full-rate
// region with no nominal wind.
inline Scenario still_air(const std::vector<Point2>& points, int horizon, double v = 0.05,
                          double eps = 0.0, Point2 ignition = {0.0, 0.0}, double half = 1.0) {
  Scenario s;
  for (std::size_t i = 0; i < points.size(); ++i) {
    s.elements.push_back({"e" + std::to_string(i), PolytopeV({points[i]})});
  }
  s.spread.B = 1.0;
  s.spread.C = 2.5010;
  s.spread.V = v;
  s.spread.epsilon = eps;
  s.spread.nominal_wind.assign(horizon + 1, Point2{0.0, 0.0});
  s.regions = RegionSet::single(PolytopeH::box(-half, -half, half, half));
  s.ignition = IgnitionMode::kFixed;
  s.ignition_point = ignition;
  return s;
}

// Periods needed to cover distance dist at speed v per period.
inline int periods_needed(double dist, double v) { return static_cast<int>(std::ceil(dist / v)); }

}  // namespace wildfire::testing

#endif  // WILDFIRE_TESTS_SUPPORT_SCENARIOS_HPP_
