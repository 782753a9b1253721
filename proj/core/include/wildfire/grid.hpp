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


#ifndef WILDFIRE_GRID_HPP_
#define WILDFIRE_GRID_HPP_

#include <optional>
#include <string>
#include <vector>

#include "wildfire/conic.hpp"
#include "wildfire/geometry.hpp"
#include "wildfire/solver.hpp"

// Multi-period DC optimal power flow with line-outage recourse.
namespace wildfire::grid {

struct Bus {
  int id = 0;
  Point2 pos;
};

// Flow is positive from `from` to `to` and equals (angle_to - angle_from) / reactance.
struct Line {
  int id = 0;
  int from = 0;
  int to = 0;
  double reactance = 1.0;
  double limit = 0.0;
};

struct Generator {
  int bus = 0;
  std::string type;
  std::vector<double> cap;  // MW per period
  double energy_cap = conic::kInf;  // MWh over the horizon
  double cost = 0.0;  // $/MWh
};

struct Storage {
  int bus = 0;
  std::vector<double> energy_cap;
  std::vector<double> power_cap;
  double eta_charge = 1.0;
  double eta_discharge = 1.0;
  double cost = 0.0;  // $/MWh discharged
};

struct Load {
  int bus = 0;
  std::vector<double> mw;
};

struct Grid {
  int periods = 1;
  std::vector<Bus> buses;
  std::vector<Line> lines;
  std::vector<Generator> generators;
  std::vector<Storage> storage;
  std::vector<Load> loads;
  double shed_cost = 10000.0;

  void validate() const;
  // Positions in buses/lines, or -1.
  int bus_index(int id) const;
  int line_index(int id) const;
  // Total demand at bus position i in period t.
  double demand(int i, int t) const;
};

// Indexed [unit][period] or [bus][period] / [line][period] by position.
struct BaseDispatch {
  std::vector<std::vector<double>> generation;
  std::vector<std::vector<double>> stored;
  std::vector<std::vector<double>> charge;
  std::vector<std::vector<double>> discharge;
  std::vector<std::vector<double>> shed;
  std::vector<std::vector<double>> flow;
  std::vector<std::vector<double>> angle;
  double cost = 0.0;  // horizon total

  double total_shed() const;
};

// Largest nodal balance residual in MW.
double balance_residual(const Grid& g, const BaseDispatch& d);

struct Contingency {
  std::vector<int> lines;  // line ids
  int period = 0;
  unsigned mask = 0;  // element subset this contingency came from, if any
};
using ContingencySet = std::vector<Contingency>;

struct Recourse {
  double cost = 0.0;  // shed_cost times the extra shed
  double extra_shed = 0.0;  // MWh
  std::vector<double> shed;  // per bus, total post-contingency shed
  std::vector<double> injection;
  std::vector<double> flow;
  std::vector<double> angle;
};

// Base operation LP with objective equal to the horizon operating cost.
conic::ConicModel build_base_opf(const Grid& g);

struct OpfResult {
  solver::Status status = solver::Status::kIterLimit;
  BaseDispatch base;
  double objective = 0.0;  // base cost / periods + mean contingency cost
  double base_cost_per_period = 0.0;
  std::vector<double> contingency_costs;  // one per contingency, $
  std::vector<Recourse> recourse;
  double seconds = 0.0;
};

OpfResult solve_base_opf(const Grid& g, const solver::SolveOptions& opts = {});

// The recourse LP alone, base quantities folded into constants. Variables are
// named k.ps[bus], k.pg[bus], k.theta[bus] and k.f[line] by id.
conic::ConicModel build_recourse(const Grid& g, const BaseDispatch& base,
                                 const std::vector<int>& line_ids, int t);

// Recourse cost of outaging `line_ids` in period t against a fixed dispatch.
Recourse contingency_recourse(const Grid& g, const BaseDispatch& base,
                              const std::vector<int>& line_ids, int t,
                              const solver::SolveOptions& opts = {});
double contingency_cost(const Grid& g, const BaseDispatch& base, const std::vector<int>& line_ids,
                        int t, const solver::SolveOptions& opts = {});

struct ScopfOptions {
  // Weight on the summed contingency costs; defaults to 1 / |K|.
  std::optional<double> contingency_weight;
};

// Base and recourse variables in one LP.
OpfResult solve_scopf(const Grid& g, const ContingencySet& k,
                      const solver::SolveOptions& opts = {}, const ScopfOptions& sopts = {});

// Sum of extra shed (MWh) over the contingencies, each evaluated against base.
double contingency_shed(const Grid& g, const BaseDispatch& base, const ContingencySet& k,
                        const solver::SolveOptions& opts = {});

// Every (subset, period) pair. element_lines[e] is the line id of element e.
ContingencySet all_contingencies(const std::vector<unsigned>& subsets,
                                 const std::vector<int>& element_lines, int periods);

// (subset, t) for every t >= t*(subset); subsets with no t* are dropped.
ContingencySet threshold_contingencies(
    const std::vector<std::pair<unsigned, std::optional<int>>>& tstar,
    const std::vector<int>& element_lines, int periods);

struct Selection {
  std::vector<int> lines;  // ids, highest impact first
  std::vector<double> impact;  // summed single-line contingency cost
  std::vector<std::string> warnings;
};

// The `count` lines within `buffer` of the perimeter with the largest summed
// single-outage cost over the horizon. Ties go to the lower line id.
Selection select_elements(const Grid& g, const PolytopeH& perimeter, double buffer,
                          const BaseDispatch& base, int count,
                          const solver::SolveOptions& opts = {});

}  // namespace wildfire::grid

#endif  // WILDFIRE_GRID_HPP_
