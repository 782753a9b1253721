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

#ifndef WILDFIRE_LP_HPP_
#define WILDFIRE_LP_HPP_

#include <cstdint>
#include <memory>
#include <vector>

#include "wildfire/conic.hpp"

namespace wildfire::lp {

enum class Status { kOptimal, kInfeasible, kUnbounded, kIterLimit };

enum class VarStatus : std::uint8_t { kBasic, kAtLower, kAtUpper, kFree };

struct Basis {
  std::vector<VarStatus> cols;
  std::vector<VarStatus> rows;
};

// Bounded-variable revised primal simplex over
//   min c.x  s.t.  row_lo <= A x <= row_hi,  col_lo <= x <= col_hi.
// Each row i carries a slack s_i = a_i.x with the row bounds, so the engine
// works on [A, -I] (x, s) = 0 with box bounds on every variable.
class Simplex {
 public:
  explicit Simplex(int num_cols);
  ~Simplex();
  Simplex(const Simplex&) = delete;
  Simplex& operator=(const Simplex&) = delete;

  int num_cols() const { return n_; }
  int num_rows() const { return m_; }

  void set_col_bounds(int j, double lo, double hi);
  double col_lower(int j) const { return lo_[j]; }
  double col_upper(int j) const { return hi_[j]; }
  void set_cost(int j, double c) { cost_[j] = c; }
  double cost(int j) const { return cost_[j]; }

  int add_row(const std::vector<conic::Term>& terms, double lo, double hi);
  // Row indices must be distinct; later rows shift down.
  void remove_rows(std::vector<int> rows);
  void truncate_rows(int m);
  const std::vector<conic::Term>& row(int i) const { return rows_[i]; }
  double row_lower(int i) const { return lo_[n_ + i]; }
  double row_upper(int i) const { return hi_[n_ + i]; }

  Status solve(long iteration_limit = -1);

  // Results of the last solve.
  Status status() const { return status_; }
  double objective() const;
  double dual_objective() const { return dual_objective_; }
  std::vector<double> primal() const;
  std::vector<double> row_activity() const;
  const std::vector<double>& duals() const { return duals_; }
  const std::vector<double>& reduced_costs() const { return reduced_costs_; }
  // Row multipliers y with max over the box of y.(A x - s) < 0.
  const std::vector<double>& farkas() const { return farkas_; }
  // Column direction r with A r inside the row recession cone and c.r < 0.
  const std::vector<double>& ray() const { return ray_; }
  long iterations() const { return total_iterations_; }

  Basis basis() const;
  void set_basis(const Basis& basis);
  bool row_is_basic(int i) const;

 private:
  struct Impl;

  int n_ = 0;
  int m_ = 0;
  std::vector<std::vector<std::pair<int, double>>> cols_;
  std::vector<std::vector<conic::Term>> rows_;
  std::vector<double> lo_, hi_, cost_;
  std::vector<VarStatus> vstat_;
  std::vector<double> value_;
  std::vector<int> head_;
  int pending_rows_ = 0;
  bool factor_valid_ = false;
  std::unique_ptr<Impl> impl_;

  Status status_ = Status::kIterLimit;
  double dual_objective_ = 0.0;
  std::vector<double> duals_, reduced_costs_, farkas_, ray_;
  long total_iterations_ = 0;
};

}  // namespace wildfire::lp

#endif  // WILDFIRE_LP_HPP_
