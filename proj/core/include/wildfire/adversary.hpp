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


#ifndef WILDFIRE_ADVERSARY_HPP_
#define WILDFIRE_ADVERSARY_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wildfire/conic.hpp"
#include "wildfire/geometry.hpp"
#include "wildfire/solver.hpp"
#include "wildfire/spread.hpp"

namespace wildfire {

// Bit e set means element e belongs to the subset.
using SubsetMask = std::uint32_t;
inline constexpr int kMaxElements = 12;

struct Element {
  std::string id;
  PolytopeV shape;
};

enum class IgnitionMode { kFixed, kFree };

struct Scenario {
  std::vector<Element> elements;
  SpreadParams spread;  // horizon T = nominal_wind.size() - 1
  RegionSet regions;
  IgnitionMode ignition = IgnitionMode::kFixed;
  Point2 ignition_point;
  // Minimum time-to-outage objective; when false the weights below are used.
  bool min_time = true;
  // Cost c_t(E') keyed by (subset, period). Missing entries are zero.
  std::map<std::pair<SubsetMask, int>, double> weights;

  int horizon() const { return spread.horizon(); }
  int num_elements() const { return static_cast<int>(elements.size()); }
  SubsetMask full_mask() const { return (SubsetMask{1} << elements.size()) - 1; }
  // Throws wildfire::Error naming the offending element or period.
  void validate() const;
  // The elements in subset, renumbered in order, with the min-time objective.
  Scenario restricted(SubsetMask subset) const;
};

struct FireTrajectory {
  Point2 ignition;
  std::vector<Point2> wind;                // per period
  std::vector<std::vector<Point2>> path;   // [element][period]
  std::vector<std::vector<int>> outage;    // [element][period], 0 or 1
  std::vector<std::vector<int>> region;    // [element][period]
  std::vector<double> z;                   // flattened [element][period], inner-product variants
  std::vector<std::string> issues;         // validation failures

  bool valid() const { return issues.empty(); }
  // First outage period of element e, or -1.
  int outage_period(int e) const;
  SubsetMask outaged_at(int t) const;
};

conic::ConicModel build_micp(const Scenario& s, const SpreadVariant& variant);

// Extracts the trajectory and re-validates every step against the spread
// predicate of the variant. tol is the absolute acceptance tolerance.
FireTrajectory decode_solution(const Scenario& s, const SpreadVariant& variant,
                               const conic::ConicModel& model, const solver::Solution& sol,
                               double tol);

struct MinTimeResult {
  solver::Status status = solver::Status::kIterLimit;
  std::optional<int> tstar;
  double gap = 0.0;
  double seconds = 0.0;
  long nodes = 0;
  FireTrajectory trajectory;
};

MinTimeResult min_time_to_outage(const Scenario& s, SubsetMask subset, const SpreadVariant& variant,
                                 const solver::SolveOptions& opts = {});

struct SequenceResult {
  solver::Status status = solver::Status::kIterLimit;
  double objective = 0.0;
  double gap = 0.0;
  double seconds = 0.0;
  long nodes = 0;
  FireTrajectory trajectory;
};

SequenceResult max_shed_sequence(const Scenario& s, const SpreadVariant& variant,
                                 const solver::SolveOptions& opts = {});

enum class Flexibility { kLow, kHigh };

// Low flexibility fixes the ignition point and keeps the nominal schedule.
// High flexibility frees the ignition point, zeroes the nominal wind and sets
// epsilon to the largest nominal speed plus hf_margin.
Scenario with_flexibility(const Scenario& s, Flexibility f, double hf_margin = 10.0);

// The variant with its exponent clamped to the range the formulation needs.
SpreadParams effective_params(const SpreadParams& p, const SpreadVariant& variant);

}  // namespace wildfire

#endif  // WILDFIRE_ADVERSARY_HPP_
