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

#ifndef WILDFIRE_SOLVER_HPP_
#define WILDFIRE_SOLVER_HPP_

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "wildfire/conic.hpp"

namespace wildfire::solver {

enum class Status { kOptimal, kInfeasible, kUnbounded, kIterLimit };

const char* to_string(Status s);

struct SolveOptions {
  double feas_tol = 1e-5;
  double opt_tol = 1e-5;
  long node_limit = 1000000;
  double time_limit = 3600.0;  // seconds
  std::uint64_t seed = 0;
  int max_cut_rounds = 200;
  // Cut pool floor per node; the pool always holds at least four cuts per cone.
  int max_cuts_per_node = 500;
  // Optional CSV node log: node,bound,incumbent,depth,cuts.
  std::ostream* node_log = nullptr;
};

struct Solution {
  Status status = Status::kIterLimit;
  double objective = 0.0;
  std::vector<double> values;
  double bound = 0.0;  // best proven bound in the model's own sense
  double gap = 0.0;    // |bound - objective| / max(1, |objective|); inf if stopped with no incumbent
  bool has_incumbent = false;
  long nodes = 0;
  long lp_iterations = 0;
  long cuts = 0;
  double max_violation = 0.0;
  // Linear programs only.
  std::vector<double> duals;
  double dual_objective = 0.0;
  std::vector<double> farkas;
  std::vector<double> ray;
};

// Linear relaxation: SOC and power constraints must be absent; binary flags
// are relaxed to their [0,1] bounds.
Solution solve_lp(const conic::ConicModel& model, const SolveOptions& opts = {});

struct Cut {
  std::vector<conic::Term> terms;
  double rhs = 0.0;  // terms . x <= rhs
};

// Supporting-hyperplane cut at the projection of the point onto the cone,
// or none if the point violates the constraint by at most tol.
std::optional<Cut> soc_separate(std::span<const double> point,
                                const conic::SocConstraint& soc, double tol = 1e-5);

// Branch-and-bound with lazy outer approximation of SOC constraints. Power
// constraints must already be rewritten.
Solution solve(const conic::ConicModel& model, const SolveOptions& opts = {});

}  // namespace wildfire::solver

#endif  // WILDFIRE_SOLVER_HPP_
